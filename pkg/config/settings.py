"""Runtime configuration management."""

from pathlib import Path

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """hybridfh runtime settings loaded from environment variables.

    These are execution knobs (parallelism, solver, tolerances). The experiment
    itself is described by ``config.experiment.ExperimentConfig``.
    """

    # Execution
    hybridfh_workers: int = 1
    hybridfh_output_dir: str = "./data/results"

    # Conic solver used for the SCA subproblems
    hybridfh_solver: str = "CLARABEL"
    hybridfh_solver_tol: float = 1e-8

    # SCA loop
    hybridfh_sca_tol: float = 1e-4
    hybridfh_sca_max_iter: int = 100

    # Monte Carlo
    hybridfh_mu_batch: int = 500
    hybridfh_cond_limit: float = 1e12

    @property
    def output_dir(self) -> Path:
        return Path(self.hybridfh_output_dir)

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "extra": "ignore"}


def get_settings() -> Settings:
    """Get application settings."""
    return Settings()
