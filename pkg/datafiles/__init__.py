from .provenance import Provenance, config_hash, read_header, write_csv
from .records_csv import COLUMNS, ValidationReport, ingest, records_to_frame, write_records
from .fitdoc import fit_from_dict, fit_to_dict, load_fit, save_fit

__all__ = ['Provenance', 'config_hash', 'read_header', 'write_csv', 'COLUMNS', 'ValidationReport', 'ingest',
           'records_to_frame', 'write_records', 'fit_from_dict', 'fit_to_dict', 'load_fit', 'save_fit']
