"""
mibench - motor-imagery EEG classification benchmark package.
"""

import os


def _get_version():
    # src/mibench/__init__.py -> project_root/VERSION
    try:
        current_dir = os.path.dirname(os.path.abspath(__file__))
        version_file_path = os.path.abspath(os.path.join(current_dir, "..", "..", "VERSION"))

        with open(version_file_path, "r", encoding="utf-8") as f:
            return f.read().strip()
    except FileNotFoundError:
        # VERSION is not shipped next to site-packages installs
        return "0.0.0+unknown"
    except Exception:
        return "0.0.0+error"


__version__ = _get_version()
