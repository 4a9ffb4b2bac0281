import pytest

from emoshop.catalog import Catalog
from emoshop.dialogue import ResponseEnvelope, ScriptedLlmProvider, ThreadStore, format_envelope
from emoshop.emotions import LABEL_ORDER, EmotionLabel
from emoshop.policy import EmpathyPolicy, directive_for
from emoshop.speechio import (
    FingerprintStt,
    FixedScorer,
    ToneTts,
    TranscriptionFailed,
    VoiceDeps,
    clip_fingerprint,
    handle_voice_message,
)
from conftest import build_products, sine_clip


def scores_with(label: EmotionLabel, weight: float) -> dict:
    rest = (1.0 - weight) / 6
    return {l: (weight if l is label else rest) for l in LABEL_ORDER}


@pytest.fixture
def catalog():
    return Catalog(products=tuple(build_products(30, seed=4)))


@pytest.fixture
def voice_audio():
    return sine_clip(220, amp=0.4, duration=0.5)


def make_deps(catalog, audio, transcript="find me a bag", scorer=None, replies=None):
    stt = FingerprintStt({clip_fingerprint(audio): transcript})
    llm = ScriptedLlmProvider(replies or ["Sure, here you go!"])
    return (
        VoiceDeps(
            stt=stt,
            tts=ToneTts(),
            scorer=scorer or FixedScorer(scores_with(EmotionLabel.HAPPINESS, 0.9)),
            policy=EmpathyPolicy(),
            llm=llm,
            catalog=catalog,
        ),
        llm,
    )


class TestHandleVoiceMessage:
    def test_happy_turn_pipeline(self, catalog, voice_audio):
        deps, llm = make_deps(catalog, voice_audio)
        store = ThreadStore()
        thread = store.create_thread()
        result = handle_voice_message(store, thread, voice_audio, deps)
        assert result.transcript == "find me a bag"
        assert result.emotion is EmotionLabel.HAPPINESS
        user_msg = thread.messages[0]
        assert user_msg.modality == "voice"
        assert user_msg.content == "find me a bag"
        assert user_msg.detected_emotion is EmotionLabel.HAPPINESS
        system_prompt, _ = llm.calls[0]
        assert directive_for(EmotionLabel.HAPPINESS).prompt_fragment in system_prompt

    def test_low_scores_degrade_to_neutrality(self, catalog, voice_audio):
        scorer = FixedScorer(scores_with(EmotionLabel.ANGER, 0.4))
        deps, llm = make_deps(catalog, voice_audio, scorer=scorer)
        store = ThreadStore()
        thread = store.create_thread()
        result = handle_voice_message(store, thread, voice_audio, deps)
        assert result.emotion is EmotionLabel.NEUTRALITY
        system_prompt, _ = llm.calls[0]
        for label in LABEL_ORDER:
            fragment = directive_for(label).prompt_fragment
            if fragment:
                assert fragment not in system_prompt

    def test_reply_audio_grows_with_text(self):
        tts = ToneTts()
        durations = [tts.synthesize("x" * n).duration for n in (5, 20, 80)]
        assert durations == sorted(durations)
        assert durations[0] < durations[1] < durations[2]

    def test_transcription_failure_leaves_thread_unchanged(self, catalog, voice_audio):
        deps, _ = make_deps(catalog, voice_audio)
        store = ThreadStore()
        thread = store.create_thread()
        unknown = sine_clip(999, amp=0.3, duration=0.3)
        with pytest.raises(TranscriptionFailed):
            handle_voice_message(store, thread, unknown, deps)
        assert thread.messages == []

    def test_scorer_crash_degrades_to_neutrality(self, catalog, voice_audio):
        class BrokenScorer:
            def score(self, clip):
                raise RuntimeError("boom")

        deps, _ = make_deps(catalog, voice_audio, scorer=BrokenScorer())
        store = ThreadStore()
        thread = store.create_thread()
        result = handle_voice_message(store, thread, voice_audio, deps)
        assert result.emotion is EmotionLabel.NEUTRALITY

    def test_reply_speech_skips_product_block(self, catalog, voice_audio):
        env = ResponseEnvelope(
            intro="Found these:", products=tuple(catalog.products[:2]), outro="More?"
        )
        deps, _ = make_deps(catalog, voice_audio, replies=[format_envelope(env)])
        store = ThreadStore()
        thread = store.create_thread()
        result = handle_voice_message(store, thread, voice_audio, deps)
        assert result.assistant_envelope == env
        spoken_len = len("Found these:\nMore?")
        expected = deps.tts.synthesize("Found these:\nMore?")
        assert result.reply_audio.duration == expected.duration


class TestFingerprint:
    def test_deterministic(self, voice_audio):
        assert clip_fingerprint(voice_audio) == clip_fingerprint(voice_audio)

    def test_distinct_clips_differ(self):
        a = clip_fingerprint(sine_clip(220, duration=0.3))
        b = clip_fingerprint(sine_clip(221, duration=0.3))
        assert a != b

    def test_table_file_round_trip(self, tmp_path, voice_audio):
        import json

        table = {clip_fingerprint(voice_audio): "hello there"}
        path = tmp_path / "stt.json"
        path.write_text(json.dumps(table), encoding="utf-8")
        stt = FingerprintStt.from_file(path)
        assert stt.transcribe(voice_audio) == "hello there"
