from photonlab.cli.config import RunConfig, default_config_toml, load_run_config, validate_run_config  # noqa: F401
