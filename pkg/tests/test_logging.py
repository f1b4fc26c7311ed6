import logging

from rtlcheck.rtl_logging import LoggerNewLine, init_logging


def test_init_logging(logger):
    assert isinstance(logger, LoggerNewLine)
    assert init_logging() is logger
    assert logger.name == "rtlcheck"


def test_children_are_plain_loggers(logger):
    child = logging.getLogger("rtlcheck.analysis.solver")
    assert not isinstance(child, LoggerNewLine)
    assert child.parent is logger


def test_console_level(logger):
    init_logging(level="WARNING")
    assert logger.console_handler.level == logging.WARNING
    init_logging(level=logging.INFO)
    assert logger.console_handler.level == logging.INFO


def test_file_handler(logger, tmp_path):
    logfile = tmp_path / "logs" / "rtlcheck.log"
    logger.setFileHandler(logfile)
    try:
        logging.getLogger("rtlcheck.ir.cfg").warning("written to the file")
        logger.newline()
        logger.fileHandler.flush()
        assert "written to the file" in logfile.read_text(encoding="utf-8")
    finally:
        logger.removeHandler(logger.fileHandler)
        logger.fileHandler.close()
        del logger.fileHandler
