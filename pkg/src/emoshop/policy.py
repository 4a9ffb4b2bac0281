"""Empathy policy: maps a detected emotion to response guidance.

Each emotion carries empathic goals, coping strategies, a tone hint and a
prompt fragment injected into the system prompt. Fragment wording ships as
editable configuration; the defaults below can be overridden from a JSON
policy file without code changes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from emoshop.emotions import EmotionLabel


class EmpathicGoal(str, Enum):
    CONSOLE = "console"
    ENCOURAGE = "encourage"
    CONGRATULATE = "congratulate"
    JOKE = "joke"
    CALM_DOWN = "calm_down"
    NONE = "none"


class CopingStrategy(str, Enum):
    PLANNING = "planning"
    POSITIVE_REINTERPRETATION = "positive_reinterpretation"
    ACCEPTANCE = "acceptance"
    SEEKING_SOCIAL_SUPPORT = "seeking_social_support"
    DENIAL_WISHFUL_THINKING = "denial_wishful_thinking"
    MENTAL_DISENGAGEMENT = "mental_disengagement"
    NONE = "none"


class EmptyBasePrompt(ValueError):
    pass


@dataclass(frozen=True)
class PolicyDirective:
    emotion: EmotionLabel
    goals: tuple[EmpathicGoal, ...]
    strategies: tuple[CopingStrategy, ...]
    tone_guidance: str
    prompt_fragment: str
    few_shot_examples: tuple[str, ...] = ()  # schema slot; ships empty (zero-shot)


_DEFAULTS: dict[EmotionLabel, PolicyDirective] = {
    EmotionLabel.HAPPINESS: PolicyDirective(
        emotion=EmotionLabel.HAPPINESS,
        goals=(EmpathicGoal.CONGRATULATE,),
        strategies=(CopingStrategy.NONE,),
        tone_guidance="upbeat and celebratory",
        prompt_fragment=(
            "The shopper sounds happy. Congratulate them warmly, mirror their "
            "enthusiasm, and keep the energy high while you help."
        ),
    ),
    EmotionLabel.SADNESS: PolicyDirective(
        emotion=EmotionLabel.SADNESS,
        goals=(EmpathicGoal.CONSOLE, EmpathicGoal.JOKE),
        strategies=(CopingStrategy.POSITIVE_REINTERPRETATION,),
        tone_guidance="gentle and warm",
        prompt_fragment=(
            "The shopper sounds sad. Console them with gentle support and a "
            "touch of light humor, without being insistent. Help them see the "
            "bright side while you assist."
        ),
    ),
    EmotionLabel.ANGER: PolicyDirective(
        emotion=EmotionLabel.ANGER,
        goals=(EmpathicGoal.CALM_DOWN,),
        strategies=(CopingStrategy.PLANNING, CopingStrategy.MENTAL_DISENGAGEMENT),
        tone_guidance="calm and steady",
        prompt_fragment=(
            "The shopper sounds angry. Use calming language, propose a simple "
            "plan with new product options, and redirect their focus away from "
            "what upset them."
        ),
    ),
    EmotionLabel.DISGUST: PolicyDirective(
        emotion=EmotionLabel.DISGUST,
        goals=(EmpathicGoal.CALM_DOWN,),
        strategies=(CopingStrategy.PLANNING,),
        tone_guidance="calm and constructive",
        prompt_fragment=(
            "The shopper sounds displeased. Stay calm and constructive, and "
            "suggest a concrete plan with alternative products they might "
            "prefer."
        ),
    ),
    EmotionLabel.FEAR: PolicyDirective(
        emotion=EmotionLabel.FEAR,
        goals=(EmpathicGoal.ENCOURAGE,),
        strategies=(CopingStrategy.SEEKING_SOCIAL_SUPPORT,),
        tone_guidance="reassuring and supportive",
        prompt_fragment=(
            "The shopper sounds anxious. Reassure and encourage them, offer "
            "supportive guidance, and make each next step feel safe and easy."
        ),
    ),
    EmotionLabel.SURPRISE: PolicyDirective(
        emotion=EmotionLabel.SURPRISE,
        goals=(EmpathicGoal.ENCOURAGE,),
        strategies=(CopingStrategy.ACCEPTANCE,),
        tone_guidance="curious and engaging",
        prompt_fragment=(
            "The shopper sounds surprised. Acknowledge the surprise with "
            "curiosity, encourage them to explore, and build on the moment."
        ),
    ),
    EmotionLabel.NEUTRALITY: PolicyDirective(
        emotion=EmotionLabel.NEUTRALITY,
        goals=(EmpathicGoal.NONE,),
        strategies=(CopingStrategy.NONE,),
        tone_guidance="neutral and helpful",
        prompt_fragment="",
    ),
}


@dataclass(frozen=True)
class EmpathyPolicy:
    directives: dict[EmotionLabel, PolicyDirective] = field(
        default_factory=lambda: dict(_DEFAULTS)
    )

    def directive_for(self, emotion: EmotionLabel) -> PolicyDirective:
        return self.directives[emotion]

    @classmethod
    def from_file(cls, path: str | Path) -> "EmpathyPolicy":
        """Load fragment/goal overrides from a JSON policy config."""
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        directives = dict(_DEFAULTS)
        for key, entry in raw.items():
            emotion = EmotionLabel(key)
            base = directives[emotion]
            directives[emotion] = PolicyDirective(
                emotion=emotion,
                goals=tuple(EmpathicGoal(g) for g in entry.get("goals", [g.value for g in base.goals])),
                strategies=tuple(
                    CopingStrategy(s)
                    for s in entry.get("strategies", [s.value for s in base.strategies])
                ),
                tone_guidance=entry.get("tone_guidance", base.tone_guidance),
                prompt_fragment=entry.get("prompt_fragment", base.prompt_fragment),
                few_shot_examples=tuple(entry.get("few_shot_examples", ())),
            )
        return cls(directives=directives)


def directive_for(emotion: EmotionLabel) -> PolicyDirective:
    """Default-policy lookup; total over the 7-label enum."""
    return _DEFAULTS[emotion]


def render_system_prompt(
    base_instructions: str,
    directive: PolicyDirective | None,
    format_rules: str,
) -> str:
    """Compose the system prompt: base, then format rules, then the fragment."""
    if not base_instructions.strip():
        raise EmptyBasePrompt("base instructions must be non-empty")
    if not format_rules.strip():
        raise EmptyBasePrompt("format rules must be non-empty")
    parts = [base_instructions.rstrip(), format_rules.rstrip()]
    if directive is not None and directive.prompt_fragment:
        parts.append(directive.prompt_fragment.rstrip())
    return "\n\n".join(parts)
