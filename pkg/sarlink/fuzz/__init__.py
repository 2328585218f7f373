"""Protocol-aware payload generation: mutation, corpora, replay and spoofing."""

from .mutator import FuzzPlanError, MutationPlan, MutationStrategy, MutationTarget, mutate
from .corpus import (
    CorpusItem, CorpusProfile, HostileKind,
    gen_corpus, generate_labeled, random_spec, read_corpus, write_corpus,
)
from .replay import ReplayError, ReplaySchedule, SpoofTemplate, replay_schedule, spoof
from .harness import CampaignResult, Finding, FindingKind, FuzzHarness, impaired_buffers

__all__ = [
    'FuzzPlanError', 'MutationPlan', 'MutationStrategy', 'MutationTarget', 'mutate',
    'CorpusItem', 'CorpusProfile', 'HostileKind',
    'gen_corpus', 'generate_labeled', 'random_spec', 'read_corpus', 'write_corpus',
    'ReplayError', 'ReplaySchedule', 'SpoofTemplate', 'replay_schedule', 'spoof',
    'CampaignResult', 'Finding', 'FindingKind', 'FuzzHarness', 'impaired_buffers',
]
