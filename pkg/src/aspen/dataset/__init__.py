"""Template-driven dataset generation, paraphrase expansion, and accounting."""

from .bow import BagOfWords, EmptyBagCategory, bundled_bow, load_bow
from .generate import (
    RETRY_CAP,
    RetryExhausted,
    generate_balanced,
    instantiate,
    instantiate_with_fills,
)
from .manifest import (
    CategoryCounts,
    DatasetManifest,
    audit_manifest,
    manifest_from_records,
)
from .records import (
    ORIGINS,
    DatasetRecord,
    read_dataset,
    record_from_line,
    record_to_line,
    write_dataset,
)
from .rephrase import (
    ExternalProcessProvider,
    IdentityProvider,
    ProviderError,
    SynonymProvider,
    rephrase_expand,
)
from .templates import (
    Placeholder,
    PlaceholderMismatch,
    TemplateFormatError,
    TemplatePair,
    bundled_templates,
    load_templates,
    parse_templates,
    scan_placeholders,
)

__all__ = [
    "ORIGINS",
    "RETRY_CAP",
    "BagOfWords",
    "CategoryCounts",
    "DatasetManifest",
    "DatasetRecord",
    "EmptyBagCategory",
    "ExternalProcessProvider",
    "IdentityProvider",
    "Placeholder",
    "PlaceholderMismatch",
    "ProviderError",
    "RetryExhausted",
    "SynonymProvider",
    "TemplateFormatError",
    "TemplatePair",
    "audit_manifest",
    "bundled_bow",
    "bundled_templates",
    "generate_balanced",
    "instantiate",
    "instantiate_with_fills",
    "load_bow",
    "load_templates",
    "manifest_from_records",
    "parse_templates",
    "read_dataset",
    "record_from_line",
    "record_to_line",
    "rephrase_expand",
    "scan_placeholders",
    "write_dataset",
]
