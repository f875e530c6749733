import sys

from src.rlbesov.cli import run


def main():
    """Entry point of the rlbesov command line.

    Subcommand groups:
    - spline, wavelet: B-splines, Battle-Lemarie functions and localized elements
    - weights: masses, local Muckenhoupt and doubling constants
    - rl: Riemann-Liouville images of splines
    - besov: wavelet coefficients and weighted Besov norm estimates
    - criteria: boundedness criteria of the Riemann-Liouville operators
    - verify: criteria against empirically estimated best constants

    Output:
    - JSON report (schema 1) or CSV table on stdout, or in the --output file
    """
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
