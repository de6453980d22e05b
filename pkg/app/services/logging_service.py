"""
Logging Service for the Rational Approximation Workbench
Handles application logging with optional file storage and in-memory retrieval
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import List, Dict, Any, Optional
import threading
from collections import Counter, deque

TEXT_LINE = "[{timestamp}] {level} [{source}] {message}"


class LoggingService:
    """Manages application logging with file storage and retrieval"""

    def __init__(self, log_dir: Optional[str] = None, max_log_entries: int = 1000,
                 level: str = 'INFO'):
        """Initialize the logging service

        Args:
            log_dir: Directory for the log file; None keeps logs in memory only
            max_log_entries: Maximum number of log entries to keep in memory
            level: Minimum level forwarded to the file handler
        """
        self.max_log_entries = max_log_entries
        self.log_entries = deque(maxlen=max_log_entries)
        self.lock = threading.Lock()
        self.log_file: Optional[Path] = None

        self.logger = logging.getLogger('rational_workbench')
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.level = getattr(logging, level.upper(), logging.INFO)

        self.configure(log_dir=log_dir, level=level)

    def configure(self, log_dir: Optional[str] = None, level: Optional[str] = None):
        """Attach (or re-attach) the file handler

        Args:
            log_dir: Directory to store the log file; None detaches file logging
            level: New minimum level for the file handler
        """
        if level:
            self.level = getattr(logging, level.upper(), logging.INFO)

        for handler in self.logger.handlers[:]:
            self.logger.removeHandler(handler)
            handler.close()

        if log_dir is None:
            self.log_file = None
            self.logger.addHandler(logging.NullHandler())
            return

        directory = Path(log_dir)
        directory.mkdir(parents=True, exist_ok=True)
        self.log_file = directory / 'workbench.log'
        self._setup_file_logging()

    def _setup_file_logging(self):
        """Setup file-based logging"""
        formatter = logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        file_handler.setLevel(self.level)
        self.logger.addHandler(file_handler)

    def log(self, level: str, message: str, source: str = 'app'):
        """Log a message with timestamp and level

        Args:
            level: Log level (INFO, WARNING, ERROR, DEBUG)
            message: Log message
            source: Service that produced the message (pade_chebyshev, remez, elemfun, api, ...)
        """
        log_entry = {
            'timestamp': datetime.now().isoformat(),
            'level': level.upper(),
            'message': message,
            'source': source
        }

        with self.lock:
            self.log_entries.append(log_entry)

        self.logger.log(
            getattr(logging, level.upper(), logging.INFO),
            f"[{source.upper()}] {message}"
        )

    def info(self, message: str, source: str = 'app'):
        """Log an info message"""
        self.log('INFO', message, source)

    def warning(self, message: str, source: str = 'app'):
        """Log a warning message"""
        self.log('WARNING', message, source)

    def error(self, message: str, source: str = 'app'):
        """Log an error message"""
        self.log('ERROR', message, source)

    def debug(self, message: str, source: str = 'app'):
        """Log a debug message"""
        self.log('DEBUG', message, source)

    def get_logs(self, limit: Optional[int] = 100, level: Optional[str] = None,
                 source: Optional[str] = None, start_date: Optional[str] = None,
                 end_date: Optional[str] = None) -> List[Dict[str, Any]]:
        """Get logs with optional filtering

        Args:
            limit: Maximum number of logs to return (newest kept)
            level: Filter by log level
            source: Filter by source; a comma-separated list selects several services
            start_date: Earliest timestamp (ISO format)
            end_date: Latest timestamp (ISO format)

        Returns:
            List of log entries, oldest first
        """
        sources = {s.strip() for s in source.split(',') if s.strip()} if source else None
        wanted_level = level.upper() if level else None

        def keep(entry: Dict[str, Any]) -> bool:
            if wanted_level and entry['level'] != wanted_level:
                return False
            if sources is not None and entry['source'] not in sources:
                return False
            if start_date and entry['timestamp'] < start_date:
                return False
            return not (end_date and entry['timestamp'] > end_date)

        with self.lock:
            logs = [entry for entry in self.log_entries if keep(entry)]
        return logs[-limit:] if limit else logs

    def get_log_stats(self) -> Dict[str, Any]:
        """Entry counts per level and per source, with the time span covered"""
        with self.lock:
            logs = list(self.log_entries)

        return {
            'total_entries': len(logs),
            'levels': dict(Counter(entry['level'] for entry in logs)),
            'sources': dict(Counter(entry['source'] for entry in logs)),
            'oldest_entry': logs[0]['timestamp'] if logs else None,
            'newest_entry': logs[-1]['timestamp'] if logs else None
        }

    def clear_logs(self):
        """Clear the in-memory entries and truncate the log file"""
        with self.lock:
            self.log_entries.clear()

        if self.log_file is not None:
            directory = self.log_file.parent
            self.configure(log_dir=None)
            self.log_file = directory / 'workbench.log'
            if self.log_file.exists():
                self.log_file.unlink()
            self.configure(log_dir=str(directory))

    def export_logs(self, format: str = 'json', logs: Optional[List[Dict[str, Any]]] = None) -> str:
        """Render entries as a JSON array or as one text line per entry

        Raises:
            ValueError: format other than json or txt
        """
        if logs is None:
            with self.lock:
                logs = list(self.log_entries)

        kind = format.lower()
        if kind == 'json':
            return json.dumps(logs, indent=2, ensure_ascii=False)
        if kind == 'txt':
            return '\n'.join(TEXT_LINE.format(**entry) for entry in logs)
        raise ValueError(f"Unsupported format: {format}")


# Global logging service instance
logging_service = LoggingService()
