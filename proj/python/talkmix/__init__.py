"""Multi-talker overlapping speech simulation toolkit."""

from ._core import (  # noqa: F401
    AnnotatedWord,
    AudioBuffer,
    DataError,
    MixedSample,
    NGramModel,
    OverlapStats,
    PoolWord,
    TimedWord,
    TokenSequence,
    Transcript,
    Utterance,
    UtterancePool,
    assign_channels,
    build_pool,
    compute_stats,
    consecutive_one,
    decode_token,
    decode_tokens,
    deserialize_tsot,
    discretize_time,
    discretize_word,
    duration_nearest_sample,
    encode_pair,
    parse_transcript_jsonl,
    read_wav,
    run_cli,
    segment_by_silence,
    serialize_tsot,
    simulate_random,
    simulate_time_based,
    simulate_word_based,
    word_count_nearest_sample,
    word_indices,
    write_wav,
)

__all__ = [name for name in dir() if not name.startswith("_")]
