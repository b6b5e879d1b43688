"""
lapbound - Command Runner

Runs the lapbound command line from a source checkout without installing
the package.
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

try:
    from lapbound.cli import main
except ImportError as e:
    print(f"Import error: {e}", file=sys.stderr)
    print("Please install the dependencies first: pip install -e .[dev]", file=sys.stderr)
    sys.exit(1)

if __name__ == "__main__":
    sys.exit(main())
