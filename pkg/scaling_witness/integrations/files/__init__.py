from scaling_witness.integrations.files.grid import GridFormat, emit_grid
from scaling_witness.integrations.files.report import build_report, dump_report, load_report
from scaling_witness.integrations.files.state import (
    load_state,
    parse_state,
    state_digest,
    to_covariance,
    to_document,
    to_state,
)
