#!/usr/bin/env python3
"""
Test runner for tsocausal
Runs the suite or one area of it (core machine, runtime, causality, delaying, linearizability, CLI)
"""

import subprocess
import sys
import os
import argparse

AREAS = ["core", "runtime", "causality", "dtf", "lin", "cli"]


def run_tests(area=None, verbose=False, coverage=False, slow=False):
    """
    Run tests using pytest

    Args:
        area: Marker of the area to run (one of AREAS), or None for everything
        verbose: Enable verbose output
        coverage: Enable coverage reporting
        slow: Include the exhaustive and long randomized tests
    """
    print("Running tsocausal test suite")
    print("=" * 60)

    package_dir = os.path.dirname(os.path.abspath(__file__))
    os.chdir(package_dir)

    cmd = [sys.executable, "-m", "pytest", "tests"]

    selected = []
    if area and area != "all":
        selected.append(area)
    if not slow:
        selected.append("not slow")
    if selected:
        cmd.extend(["-m", " and ".join(selected)])

    cmd.append("-v" if verbose else "-q")
    cmd.extend(["--tb=short", "--strict-markers"])

    if coverage:
        cmd.extend(["--cov=.", "--cov-report=html", "--cov-report=term"])

    try:
        print(f"Running command: {' '.join(cmd)}")
        print("-" * 60)
        result = subprocess.run(cmd, capture_output=False, text=True)
        return result.returncode == 0
    except Exception as e:
        print(f"Error running tests: {e}")
        return False


def run_specific_test(test_file, verbose=False):
    """Run a specific test file"""
    print(f"Running specific test: {test_file}")
    print("=" * 50)

    package_dir = os.path.dirname(os.path.abspath(__file__))
    os.chdir(package_dir)

    cmd = [sys.executable, "-m", "pytest", test_file, "-v" if verbose else "-q", "--tb=short"]

    try:
        result = subprocess.run(cmd, capture_output=False, text=True)
        return result.returncode == 0
    except Exception as e:
        print(f"Error running test {test_file}: {e}")
        return False


def list_available_tests():
    """List all available test files"""
    print("Available Test Files:")
    print("=" * 30)

    tests_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), "tests")
    test_files = sorted(
        f"tests/{name}" for name in os.listdir(tests_dir)
        if name.startswith("test_") and name.endswith(".py")
    )
    for i, test_file in enumerate(test_files, 1):
        print(f"{i:2d}. {test_file}")

    print(f"\nTotal: {len(test_files)} test files")


def main():
    """Main function with command line argument parsing"""
    parser = argparse.ArgumentParser(description="tsocausal Test Runner")
    parser.add_argument(
        "--type",
        choices=AREAS + ["all"],
        default="all",
        help="Area of tests to run (default: all)"
    )
    parser.add_argument("--file", type=str, help="Run a specific test file")
    parser.add_argument("--slow", action="store_true", help="Include slow exhaustive tests")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose output")
    parser.add_argument("--coverage", "-c", action="store_true", help="Enable coverage reporting")
    parser.add_argument("--list", "-l", action="store_true", help="List available test files")

    args = parser.parse_args()

    if args.list:
        list_available_tests()
        return

    if args.file:
        success = run_specific_test(args.file, args.verbose)
    else:
        success = run_tests(args.type, args.verbose, args.coverage, args.slow)

    if success:
        print("\nAll tests passed!")
        if args.coverage:
            print("Coverage report generated in htmlcov/index.html")
    else:
        print("\nSome tests failed!")
        sys.exit(1)


if __name__ == "__main__":
    main()
