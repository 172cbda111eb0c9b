"""
Verify Installation Script
Checks if all dependencies are properly installed and the core numerics run
"""

import sys
import importlib
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))


def print_header(text):
    """Print section header"""
    print(f"\n{'='*60}")
    print(f"  {text}")
    print(f"{'='*60}\n")


def check_python_version():
    """Check Python version"""
    print("Checking Python version...")
    version = sys.version_info
    print(f"  Python {version.major}.{version.minor}.{version.micro}")

    if version.major < 3 or (version.major == 3 and version.minor < 9):
        print("  ✗ Python 3.9+ required")
        return False
    print("  ✓ Python version OK")
    return True


def check_python_packages():
    """Check Python packages"""
    print("\nChecking Python packages...")

    required_packages = {
        'numpy': 'numpy',
        'scipy': 'scipy',
        'pandas': 'pandas',
        'pyyaml': 'yaml',
        'tqdm': 'tqdm',
        'tabulate': 'tabulate',
        'pytest': 'pytest',
        'hypothesis': 'hypothesis',
    }

    all_ok = True
    for package_name, import_name in required_packages.items():
        try:
            module = importlib.import_module(import_name)
            version = getattr(module, '__version__', 'unknown')
            print(f"  ✓ {package_name}: {version}")
        except ImportError:
            print(f"  ✗ {package_name}: NOT INSTALLED")
            all_ok = False

    return all_ok


def check_toeplitz_support():
    """scipy.linalg.matmul_toeplitz is needed for large phase truncations"""
    print("\nChecking scipy Toeplitz products...")
    try:
        from scipy.linalg import matmul_toeplitz  # noqa: F401
        print("  ✓ scipy.linalg.matmul_toeplitz available")
        return True
    except ImportError:
        print("  ✗ scipy.linalg.matmul_toeplitz missing (scipy >= 1.6 required)")
        return False


def check_project_structure():
    """Check project structure"""
    print("\nChecking project structure...")

    required = ['src', 'config', 'experiments', 'tests', 'config/default_config.yaml']
    all_ok = True
    for name in required:
        if Path(name).exists():
            print(f"  ✓ {name}")
        else:
            print(f"  ✗ {name} NOT FOUND")
            all_ok = False
    return all_ok


def test_angle_operator():
    """Smoke test: <1|Theta_N|0> of the symmetric ordering is -i"""
    print("\nTesting angle operator...")
    try:
        from src.angle import angle_operator
        from src.kernel import SYMMETRIC_KERNEL

        value = angle_operator(SYMMETRIC_KERNEL, 4)[1, 0]
        if abs(value + 1j) < 1e-12:
            print("  ✓ Symmetric angle operator OK")
            return True
        print(f"  ✗ Unexpected entry {value}")
        return False
    except Exception as e:
        print(f"  ✗ Angle operator failed: {e}")
        return False


def main():
    """Main verification function"""
    print_header("INSTALLATION VERIFICATION")

    results = {
        'python_version': check_python_version(),
        'python_packages': check_python_packages(),
        'toeplitz_support': check_toeplitz_support(),
        'project_structure': check_project_structure(),
        'angle_operator': test_angle_operator(),
    }

    print_header("VERIFICATION SUMMARY")
    for check, ok in results.items():
        status = "✓" if ok else "✗"
        print(f"  {status} {check.replace('_', ' ').title()}")

    print("\n" + "="*60)
    if all(results.values()):
        print("✓ All components installed!")
        print("\nYou can now:")
        print("  1. Run the test suite:  pytest")
        print("  2. Run all experiments: python experiments/run_all_experiments.py")
        return 0

    print("✗ Some components missing!")
    print("\nPlease:")
    print("  1. Install missing packages: pip install -r requirements.txt")
    print("  2. Run this script again")
    return 1


if __name__ == '__main__':
    sys.exit(main())
