#!/usr/bin/env python
"""Test runner with coverage reporting"""

import subprocess
import sys


def run_tests(slow: bool = False):
    """Run the test suite with coverage; desk-scale runs only with --slow"""

    print("=" * 60)
    print("Running randwave tests")
    print("=" * 60)

    cmd = [
        sys.executable, "-m", "pytest",
        "tests/",
        "-v",
        "--cov=src",
        "--cov-report=term-missing",
        "--cov-report=html:coverage_report",
        "--tb=short",
    ]
    if not slow:
        cmd += ["-m", "not slow"]

    result = subprocess.run(cmd)
    if result.returncode == 0:
        print("\nAll tests passed")
        print("Coverage report generated in coverage_report/index.html")
    else:
        print("\nSome tests failed. Check the output above.")
        sys.exit(1)


if __name__ == "__main__":
    run_tests(slow="--slow" in sys.argv[1:])
