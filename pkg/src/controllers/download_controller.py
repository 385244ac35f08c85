#!/usr/bin/env python3
import io
import zipfile
from pathlib import Path
from typing import Tuple

import requests

from ..models.errors import DownloadError
from ..utils.constants import MOVIELENS_FILES, MOVIELENS_URLS
from ..utils.logger import logger


class DownloadController:
    """Fetches public MovieLens archives into the data directory"""

    def __init__(self, data_dir: str, timeout: int = 60):
        self.data_dir = Path(data_dir)
        self.timeout = timeout

    def ratings_path(self, name: str) -> Tuple[Path, str]:
        """Location and format of a dataset's ratings file once extracted"""
        if name not in MOVIELENS_FILES:
            raise DownloadError(f"unknown dataset '{name}', expected one of {', '.join(MOVIELENS_FILES)}")
        relative, fmt = MOVIELENS_FILES[name]
        return self.data_dir / relative, fmt

    def fetch(self, name: str, force: bool = False) -> Path:
        """Download and extract an archive unless its ratings file already exists"""
        target, _ = self.ratings_path(name)
        if target.exists() and not force:
            logger.info(f"{name} already present at {target}")
            return target

        url = MOVIELENS_URLS[name]
        logger.info(f"Downloading {name} from {url}")
        try:
            response = requests.get(url, timeout=self.timeout)
            logger.info(f"Response status code: {response.status_code}")
            if response.status_code != 200:
                raise DownloadError(f"server returned status code {response.status_code} for {url}")
            logger.info(f"Received {len(response.content)} bytes")
        except requests.exceptions.ConnectionError as e:
            logger.error(f"Connection error details: {str(e)}")
            raise DownloadError(f"could not connect to {url}") from e
        except requests.exceptions.Timeout as e:
            logger.error(f"Timeout error details: {str(e)}")
            raise DownloadError(f"request timed out after {self.timeout} seconds") from e
        except requests.exceptions.RequestException as e:
            logger.error(f"Request error details: {str(e)}")
            raise DownloadError(f"request error: {str(e)}") from e

        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            with zipfile.ZipFile(io.BytesIO(response.content)) as archive:
                archive.extractall(self.data_dir)
        except (zipfile.BadZipFile, OSError) as e:
            raise DownloadError(f"could not unpack {url}: {e}") from e

        if not target.exists():
            raise DownloadError(f"archive from {url} did not contain {target.name}")
        logger.info(f"Extracted {name} to {target.parent}")
        return target
