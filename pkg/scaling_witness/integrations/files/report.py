from logging import getLogger

import arrow

from scaling_witness.integrations.files.state import State, state_digest, to_document
from scaling_witness.models.documents import ReportDocument
from scaling_witness.models.scan import WitnessResult
from scaling_witness.models.settings import AnalysisSettings

logger = getLogger(__name__)


def build_report(state: State, result: WitnessResult, settings: AnalysisSettings) -> ReportDocument:
    """
    Collect the analysis of a state into a report document.

    The parameters record the pre-scan resolution the search actually used, also when it was chosen automatically.
    """
    document = to_document(state)
    return ReportDocument(
        generated_at=arrow.utcnow().datetime,
        state_digest=state_digest(document),
        state=document,
        verdict=result.verdict,
        depth=result.depth,
        minimum=result.minimum,
        best_lambdas=result.best_lambdas,
        minors=result.minors,
        parameters=settings.model_copy(update={"grid": result.resolution}),
    )


def dump_report(report: ReportDocument) -> str:
    return report.model_dump_json(indent=2)


def load_report(text: str) -> ReportDocument:
    return ReportDocument.model_validate_json(text)
