from photonlab.adapters.csv_adapter import CSVAdapter, write_csv  # noqa: F401
from photonlab.adapters.file_adapter import FileAdapter  # noqa: F401
from photonlab.adapters.ptag_adapter import PtagAdapter, write_ptag  # noqa: F401
from photonlab.adapters.super_adapter import SuperAdapter  # noqa: F401
from photonlab.adapters.tag_files import TAG_FORMATS, infer_tag_format, read_tags, write_tags  # noqa: F401
