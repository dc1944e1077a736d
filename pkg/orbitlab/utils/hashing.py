import hashlib
import json


def config_hash(config) -> str:
    """sha256 над каноничния JSON на конфигурацията"""
    data = config.to_dict() if hasattr(config, "to_dict") else config
    value = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str).encode("utf-8")
    return hashlib.sha256(value).hexdigest()

