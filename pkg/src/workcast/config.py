"""Application configuration with environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .forecast import TrainConfig

ENV_PREFIX = "WORKCAST_"


@dataclass
class AppConfig:
    data_dir: Path = Path("workcast-data")
    model_dir: Path = Path("workcast-models")
    bind: str = "127.0.0.1:8000"
    seed: int = 0
    train: TrainConfig = field(default_factory=TrainConfig)
    log_schema: Mapping[str, str] | None = None
    ui_dir: Path | None = None

    def ensure_dirs(self) -> None:
        """Create data/model directories and verify they are writable."""
        for directory in (self.data_dir, self.model_dir):
            directory.mkdir(parents=True, exist_ok=True)
            if not os.access(directory, os.W_OK):
                raise PermissionError(f"directory {directory} is not writable")

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "AppConfig":
        """Build a config from WORKCAST_* environment variables
        (DATA_DIR, MODEL_DIR, BIND, SEED, EPOCHS, WINDOW, HIDDEN_DIM,
        LEARNING_RATE, UI_DIR)."""
        env = dict(os.environ if environ is None else environ)

        def get(name: str, default):
            return env.get(ENV_PREFIX + name, default)

        train = TrainConfig(
            window=int(get("WINDOW", TrainConfig.window)),
            epochs=int(get("EPOCHS", TrainConfig.epochs)),
            hidden_dim=int(get("HIDDEN_DIM", TrainConfig.hidden_dim)),
            learning_rate=float(get("LEARNING_RATE", TrainConfig.learning_rate)),
            seed=int(get("SEED", 0)),
        )
        ui_dir = get("UI_DIR", None)
        return cls(
            data_dir=Path(get("DATA_DIR", "workcast-data")),
            model_dir=Path(get("MODEL_DIR", "workcast-models")),
            bind=str(get("BIND", "127.0.0.1:8000")),
            seed=int(get("SEED", 0)),
            train=train,
            ui_dir=Path(ui_dir) if ui_dir else None,
        )
