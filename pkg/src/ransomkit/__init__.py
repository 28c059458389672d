"""ransomkit: static/dynamic ransomware feature extraction, selection and detection."""

__version__ = "0.1.0"
