"""Dataset ingestion (CSV) and synthetic generation."""

from .csv_io import expected_header, load_dataset_csv, save_dataset_csv
from .synthetic import SyntheticSpec, class_centers, generate_synthetic

__all__ = [
    'SyntheticSpec',
    'class_centers',
    'expected_header',
    'generate_synthetic',
    'load_dataset_csv',
    'save_dataset_csv',
]
