from ._path_tools import get_key_dirs, add_dirs_to_env, RUN_FILES
from .setup import setup_key_dirs, default_main_dir, DEFAULT_MAIN_DIR
