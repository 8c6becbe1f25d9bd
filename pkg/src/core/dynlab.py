"""Main DynLab orchestration class"""

import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger

from .config import LabConfig


class DynLab:
    """Configured lab: logging, thread count and experiment dispatch."""

    def __init__(self, config_path: str | Path | None = None, config: LabConfig | None = None):
        """
        Initialize the lab

        Args:
            config_path: Path to a YAML, JSON or TOML configuration file
            config: Optional LabConfig object (overrides config_path)
        """
        if config:
            self.config = config
        elif config_path:
            self.config = LabConfig.from_file(config_path)
        else:
            self.config = LabConfig()

        self._setup_logging()
        self._setup_threads()

    def _setup_logging(self) -> None:
        """Setup logging configuration"""
        log_level = self.config.system.log_level
        log_file = self.config.system.log_file

        logger.remove()
        logger.add(
            sys.stderr,
            level=log_level,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
        )
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            logger.add(
                log_file,
                level=log_level,
                rotation="10 MB",
                retention="7 days",
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function} - {message}"
            )

    def _setup_threads(self) -> None:
        threads = self.config.system.threads
        if not threads:
            return
        import numba

        numba.set_num_threads(min(int(threads), numba.config.NUMBA_NUM_THREADS))
        logger.debug(f"numba threads: {numba.get_num_threads()} (cpus: {os.cpu_count()})")

    def run(self, key: str, output_dir: Optional[str | Path] = None):
        """Run one experiment or tool by its CLI key."""
        from ..lab.runner import run_experiment

        return run_experiment(self.config, key, output_dir, progress=self.config.system.progress)

    def get_stats(self) -> Dict[str, Any]:
        """Configuration summary"""
        return {
            "name": self.config.system.name,
            "version": self.config.system.version,
            "threshold_profile": self.config.threshold_profile,
            "thresholds": self.config.thresholds,
            "output_dir": self.config.output_dir,
        }
