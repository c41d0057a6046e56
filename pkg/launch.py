#!/usr/bin/env python3
"""
Ordinal-RL Launcher Script
Sets the Python path and forwards the command line to the experiment CLI.
"""

import os
import sys


def main():
    """Launch the Ordinal-RL command line."""

    # Get the current directory (where this script is located)
    current_dir = os.path.dirname(os.path.abspath(__file__))

    # Add the current directory to Python path
    if current_dir not in sys.path:
        sys.path.insert(0, current_dir)

    try:
        from app.main import main as cli_main
    except ImportError as e:
        print(f"❌ Import error: {e}")
        print("💡 Make sure you have installed all dependencies:")
        print("   pip install -r requirements.txt")
        return 1

    try:
        return cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        print("🛑 Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
