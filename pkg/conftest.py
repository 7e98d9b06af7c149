import os
import sys

# Make `import mibench` work from a plain checkout
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))


def pytest_configure(config):
    # Register the slow marker so pytest doesn't warn about it.
    config.addinivalue_line("markers", "slow: Monte-Carlo end-to-end checks (seconds to minutes)")
