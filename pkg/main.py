import logging
import os
import sys, traceback
import time
from datetime import datetime

from src.cli.main import load_settings, run

##log directory
here = os.path.dirname(os.path.abspath(__file__))
try:
    config, CONFIG_PATH = load_settings()
except FileNotFoundError:
    config, CONFIG_PATH = {}, None
log_cfg = config.get("logging") or {}
LOG_DIR = os.path.join(here, log_cfg.get("dir", "logs"))
os.makedirs(LOG_DIR, exist_ok=True)

##timestamp log file
log_filename = f"run_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
log_path = os.path.join(LOG_DIR, log_filename)

##logger; stdout carries the reports
logging.basicConfig(
    level=getattr(logging, str(log_cfg.get("level", "INFO")).upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    handlers=[
        logging.FileHandler(log_path, encoding="utf-8"),
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger(__name__)


if __name__ == "__main__":
    logger.info(f">>> Python: {sys.executable}")
    logger.info(f">>> Entry: {__file__}")
    logger.info(f">>> Config: {CONFIG_PATH}")
    try:
        logger.info(f">>> Starting {' '.join(sys.argv[1:]) or 'run'}")
        start_time = time.time()
        code = run(sys.argv[1:])
        duration = time.time() - start_time
        logger.info(f">>> Finished in {duration:.2f} seconds, exit code {code}")
        sys.exit(code)
    except SystemExit as se:
        logger.info(f"!!! SystemExit: {se}")
        raise
    except Exception:
        logger.info("!!! Unhandled exception:")
        traceback.print_exc()
        raise
