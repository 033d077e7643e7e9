"""
Command-line entry point: python -m cli {synth,train,eval,predict,gradcheck}.
"""

from cli.commands import main
from cli.config import RunConfig, load_run_config

__all__ = ["main", "RunConfig", "load_run_config"]
