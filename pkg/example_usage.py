#!/usr/bin/env python3
"""
Example usage of the Susceptibility Pipeline
Demonstrates a sweep, a roots report and a single-point comparison of the three
evaluation routes
"""

import sys
import logging
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent / "src"))

from core.contour import Method, evaluate
from core.errors import SusceptibilityError
from core.model import DriveParams, drive_params_from_saturation
from core.spectra import Component
from core.susceptibility_pipeline import RunConfig, SusceptibilityPipeline

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


def main():
    """Main function to demonstrate the pipeline"""
    try:
        # Initialize the pipeline
        logger.info("Initializing Susceptibility Pipeline...")
        pipeline = SusceptibilityPipeline()

        # Kerr-type response of a saturated transition
        logger.info("Running kerr-z sweep...")
        output = pipeline.run_sweep(RunConfig(
            component=Component.KERR_Z,
            saturation=10.0,
            points=401,
            output="output/example_kerr_z.csv",
        ))

        frame = output.frame
        gain = frame[frame['im'] < 0]
        print("\n" + "=" * 50)
        print("SWEEP SUMMARY")
        print("=" * 50)
        print(f"  Rabi frequency: {output.params.rabi:.4f}")
        print(f"  Samples: {len(frame)}")
        print(f"  Peak |chi|: {frame['abs'].max():.4f} at omega={frame.loc[frame['abs'].idxmax(), 'omega']:.3f}")
        print(f"  Gain points: {len(gain)}")

        # Quasi-energies of the dressed transition
        report = pipeline.run_roots(DriveParams(gamma=1.0, delta=0.5, rabi=3.0))
        print("\n" + "=" * 50)
        print(f"TRIPLET ROOTS ({report['regime']})")
        print("=" * 50)
        for root in report['roots']:
            print(f"  {root['re']:+.6f} {root['im']:+.6f}i")

        # The same point by every route
        p = drive_params_from_saturation(1.0, 0.5, 3.0)
        print("\n" + "=" * 50)
        print("ROUTE COMPARISON (parametric-z, omega=0.8)")
        print("=" * 50)
        for method in Method:
            value = evaluate(Component.PARAMETRIC_Z, p, 0.8, method)
            print(f"  {method.value:<10} {value.real:+.10f} {value.imag:+.10f}i")

        logger.info("Example completed successfully!")

    except SusceptibilityError as e:
        logger.error(f"Error running example: {e}")
        raise


if __name__ == "__main__":
    main()
