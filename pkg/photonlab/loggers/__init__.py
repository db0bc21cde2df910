from photonlab.loggers.report_logger import ReportLogger  # noqa: F401
