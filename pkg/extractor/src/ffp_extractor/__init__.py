"""ffp_extractor: context-dependent encoder embeddings in the fuzzyfp file format."""

from .config import ExtractorConfig, load_config
from .corpus import Utterance, read_dailydialog, read_utterance_file
from .extract import extract_records, run_extraction, write_embeddings
from .finetune import EarlyStopper, FineTuneResult, fine_tune
from .inputs import build_input

__version__ = "0.1.0"
