from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "env_prefix": "SEQEXP_"}

    # Physics
    gamma: float = 1.4  # ideal gas, used by every Euler case

    # Numerics
    cfl_safety: float = 0.9  # default fraction of a scheme's CFL_max
    denominator_floor: float = 0.1  # compressive denominator / Lagrange volume floor
    unit_circle_tol: float = 1e-10
    euler_unit_circle_tol: float = 1e-8
    riemann_tol: float = 1e-12

    # Stability sweeps
    beta_samples: int = 128
    beta_samples_3d: int = 64
    min_beta_samples: int = 64  # per axis
    bisect_tol: float = 1e-4
    confirm_points: int = 256  # wavenumbers re-checked by the Schur criterion at a bound
    power_iterations: int = 2000
    power_iteration_rtol: float = 2e-2

    # Execution
    max_threads: int = 4  # hard cap on every worker pool
    debug_checks: bool = False  # scan for NaN/Inf after each ghost fill

    # Output
    output_dir: str = "out"
    csv_precision: int = 17

    # App
    log_level: str = "INFO"


settings = Settings()
