from scaling_witness.models.documents import ReportDocument, StateKind, StateSpecFile
from scaling_witness.models.scaling import MinorReport, ScalingVector, Verdict
from scaling_witness.models.scan import ScanGrid, ScanSummary, SlicePlan, WitnessResult
from scaling_witness.models.settings import AnalysisSettings
from scaling_witness.models.state import CovarianceMatrix, PureStateSpec, SymplecticShift
