"""
运行清单（manifest）管理

每次 CLI 运行在输出旁写入 <stem>.manifest.json：命令、参数、种子、时间戳、
输出路径、通过的不变量检查与各输出文件的 SHA-256。
清单采用原子写入（临时文件 + 重命名），并附带 .sha256 校验文件。
时间戳只出现在清单中，数据文件本身不含任何时间信息。
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from .qudit.core import GiniQuditError

logger = logging.getLogger("giniqudit.manifest")

MANIFEST_VERSION = "1.0"
MANIFEST_SUFFIX = ".manifest.json"


class ManifestError(GiniQuditError):
    """清单缺失、损坏或校验和不符"""
    pass


@dataclass
class RunManifest:
    """一次运行的清单"""
    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    output_paths: List[str] = field(default_factory=list)
    timestamp: str = ""
    version: str = MANIFEST_VERSION
    status: str = "completed"  # completed, failed
    checks: List[str] = field(default_factory=list)
    data_checksums: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now().isoformat()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "status": self.status,
            "output_paths": list(self.output_paths),
            "checks": list(self.checks),
            "data_checksums": dict(self.data_checksums),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(
            command=data["command"],
            config=data.get("config", {}),
            seed=data.get("seed"),
            output_paths=data.get("output_paths", []),
            timestamp=data.get("timestamp", ""),
            version=data.get("version", MANIFEST_VERSION),
            status=data.get("status", "completed"),
            checks=data.get("checks", []),
            data_checksums=data.get("data_checksums", {}),
        )


def file_checksum(path: Path) -> str:
    """文件内容的 SHA-256"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest_path_for(output: Path) -> Path:
    """out.csv → out.manifest.json"""
    output = Path(output)
    return output.with_name(output.stem + MANIFEST_SUFFIX)


class ManifestWriter:
    """清单读写"""

    def _compute_checksum(self, content: str) -> str:
        return hashlib.sha256(content.encode("utf-8")).hexdigest()

    def _checksum_path(self, path: Path) -> Path:
        return path.with_name(path.name + ".sha256")

    def save(self, manifest: RunManifest, path: Path) -> Path:
        """
        原子写入清单。

        Args:
            manifest: 清单对象；data_checksums 按 output_paths 重新计算
            path: 清单文件路径

        Returns:
            清单文件路径
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        manifest.data_checksums = {
            p: file_checksum(Path(p)) for p in manifest.output_paths if Path(p).exists()
        }
        content = json.dumps(manifest.to_dict(), indent=2, ensure_ascii=False)
        checksum = self._compute_checksum(content)

        checksum_path = self._checksum_path(path)
        temp_path = path.with_name(path.name + ".tmp")
        temp_checksum_path = checksum_path.with_name(checksum_path.name + ".tmp")

        try:
            temp_path.write_text(content, encoding="utf-8")
            temp_checksum_path.write_text(checksum, encoding="utf-8")
            temp_path.replace(path)
            temp_checksum_path.replace(checksum_path)
        except OSError:
            temp_path.unlink(missing_ok=True)
            temp_checksum_path.unlink(missing_ok=True)
            raise

        logger.debug("manifest written to %s", path)
        return path

    def load(self, path: Path) -> RunManifest:
        """
        加载并校验清单。

        Raises:
            ManifestError: 文件缺失、校验和不符或内容损坏
        """
        path = Path(path)
        if not path.exists():
            raise ManifestError(f"清单不存在: {path}")

        content = path.read_text(encoding="utf-8")
        checksum_path = self._checksum_path(path)
        if checksum_path.exists():
            expected = checksum_path.read_text(encoding="utf-8").strip()
            if expected != self._compute_checksum(content):
                raise ManifestError(f"清单校验和不符: {path}")

        try:
            return RunManifest.from_dict(json.loads(content))
        except (json.JSONDecodeError, KeyError) as e:
            raise ManifestError(f"清单损坏: {path}: {e}")


def verify_outputs(manifest: RunManifest) -> List[str]:
    """
    重新计算输出文件的校验和。

    Returns:
        缺失或内容不一致的输出路径列表；空列表表示全部一致
    """
    mismatched = []
    for output_path, expected in manifest.data_checksums.items():
        path = Path(output_path)
        if not path.exists() or file_checksum(path) != expected:
            mismatched.append(output_path)
    return mismatched
