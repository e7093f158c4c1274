"""tmbench: a translation-memory post-editing workbench.

Word-level fuzzy matching with block shifts, TF-IDF pruned TM retrieval,
green/red match coloring, suggestion assembly from TM/MT/APE sources,
XML post-edit logging, and agreement/correlation analytics, tied together
by a small HTTP service.
"""

from .analytics import (
    AgreementReport,
    EditTypeFrequencies,
    SelectionTable,
    agreement_report,
    bin_by_quantiles,
    cohen_kappa,
    edit_type_frequencies,
    pearson_rho,
    selection_rates,
    time_edits_series,
)
from .coloring import (
    GREEN,
    RED,
    ColoredSuggestion,
    TokenLabel,
    diagonal_alignment,
    expand_spans,
    label_source,
    merge_spans,
    project_to_target,
    to_span_json,
)
from .editlog import (
    DuplicateRecordError,
    EditLogRecord,
    LogFormatError,
    Session,
    count_edits,
    export_alignments,
    export_xml,
    import_xml,
    record_postedit,
)
from .retrieval import (
    DuplicateEntryError,
    Index,
    RankedCandidate,
    TMEntry,
    add_entry,
    build_index,
    ir_query,
    parse_tm_file,
    retrieve_matches,
)
from .store import Workbench
from .suggestions import (
    Origin,
    SuggestionSet,
    SuggestionTables,
    assemble_suggestions,
)
from .textcore import (
    EditOp,
    EditOpKind,
    EditScript,
    Segment,
    Token,
    apply_shift,
    segment,
    similarity,
    ter_align,
    tokenize,
)

__all__ = [
    "AgreementReport",
    "ColoredSuggestion",
    "DuplicateEntryError",
    "DuplicateRecordError",
    "EditLogRecord",
    "EditOp",
    "EditOpKind",
    "EditScript",
    "EditTypeFrequencies",
    "GREEN",
    "Index",
    "LogFormatError",
    "Origin",
    "RED",
    "RankedCandidate",
    "Segment",
    "SelectionTable",
    "Session",
    "SuggestionSet",
    "SuggestionTables",
    "TMEntry",
    "Token",
    "TokenLabel",
    "Workbench",
    "add_entry",
    "agreement_report",
    "apply_shift",
    "assemble_suggestions",
    "bin_by_quantiles",
    "build_index",
    "cohen_kappa",
    "count_edits",
    "diagonal_alignment",
    "edit_type_frequencies",
    "expand_spans",
    "export_alignments",
    "export_xml",
    "import_xml",
    "ir_query",
    "label_source",
    "merge_spans",
    "parse_tm_file",
    "pearson_rho",
    "project_to_target",
    "record_postedit",
    "retrieve_matches",
    "segment",
    "selection_rates",
    "similarity",
    "ter_align",
    "time_edits_series",
    "to_span_json",
    "tokenize",
]
