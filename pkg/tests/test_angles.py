"""Prompt construction, completion parsing, redundancy flags, generation cache."""

from datetime import date

import pytest

from cnd.angles import (
    PROMPT_INSTRUCTION,
    AngleSet,
    FixedAngleProvider,
    GenerationParams,
    IncompleteGenerationError,
    RateLimiter,
    StubAngleProvider,
    build_prompt,
    flag_redundant,
    format_angles,
    generate_angles,
    parse_angles,
)
from cnd.corpus import ArticleRecord
from cnd.relevance import StubEmbeddingProvider


def article(title="T.", abstract="A.", article_id="2201.00001") -> ArticleRecord:
    return ArticleRecord(
        id=article_id,
        title=title,
        abstract=abstract,
        url=f"https://arxiv.org/abs/{article_id}",
        primary_category="cs.LG",
        categories=["cs.LG"],
        published_date=date(2022, 1, 3),
    )


class TestBuildPrompt:
    def test_exact_instruction_then_title_then_abstract(self):
        assert (
            build_prompt(article("T.", "A."))
            == "List three newsworthy headlines for this abstract: T. A."
        )

    def test_identical_articles_identical_prompts(self):
        assert build_prompt(article()) == build_prompt(article())

    def test_long_abstract_passes_through(self):
        abstract = "w" * 5000
        prompt = build_prompt(article(abstract=abstract))
        assert abstract in prompt
        assert prompt.startswith(PROMPT_INSTRUCTION)
        assert prompt == prompt.rstrip()


class TestParseAngles:
    def test_numbered(self):
        assert parse_angles("1. Alpha\n2. Beta\n3. Gamma") == ["Alpha", "Beta", "Gamma"]

    def test_dashes_takes_first_three(self):
        assert parse_angles("- A\n\n- B\n- C\n- D") == ["A", "B", "C"]

    def test_single_line_errors(self):
        with pytest.raises(IncompleteGenerationError) as excinfo:
            parse_angles("only one line")
        assert excinfo.value.completion == "only one line"

    def test_paren_markers_and_quotes(self):
        completion = '1) "Quoted headline"\n2) “Curly quoted”\n3) plain'
        assert parse_angles(completion) == ["Quoted headline", "Curly quoted", "plain"]

    def test_bullets(self):
        assert parse_angles("• One\n• Two\n• Three") == ["One", "Two", "Three"]

    def test_numeric_headline_survives(self):
        parsed = parse_angles("1. 3 ways AI changes weather\n2. B\n3. C")
        assert parsed[0] == "3 ways AI changes weather"

    @pytest.mark.parametrize("style", ["numbered", "paren", "bullet", "dash"])
    def test_round_trip_over_marker_styles(self, style):
        angles = ["Alpha beta", "Gamma delta", "Epsilon zeta"]
        assert parse_angles(format_angles(angles, style)) == angles


class TestGenerationParams:
    def test_defaults_match_tuned_configuration(self):
        params = GenerationParams()
        assert params.to_json_dict() == {
            "temperature": 0.85,
            "frequency_penalty": 0.85,
            "presence_penalty": 0.85,
            "model_name": "text-davinci-002",
        }

    def test_bounds(self):
        with pytest.raises(ValueError):
            GenerationParams(temperature=-0.1)
        with pytest.raises(ValueError):
            GenerationParams(frequency_penalty=2.5)

    def test_json_round_trip(self):
        params = GenerationParams(temperature=0.2, frequency_penalty=1.0, presence_penalty=-1.0)
        assert GenerationParams.from_json_dict(params.to_json_dict()) == params


EMBED = StubEmbeddingProvider(dim=512, seed=0)
ABSTRACT = "We study graph neural networks for molecule property prediction."


class TestFlagRedundant:
    def test_three_identical_keeps_first(self):
        flags = flag_redundant(["Same headline"] * 3, ABSTRACT, EMBED)
        assert flags == [False, True, True]

    def test_abstract_copy_flagged(self):
        angles = ["Fresh angle about robots", ABSTRACT, "Another different take"]
        flags = flag_redundant(angles, ABSTRACT, EMBED)
        assert flags[1] is True
        assert flags[0] is False

    def test_distinct_fixtures_unflagged(self):
        angles = [
            "Molecule prediction gets faster with graph learning",
            "Chemists eye new software for drug screening",
            "Neural networks read molecular structure like a map",
        ]
        flags = flag_redundant(angles, ABSTRACT, EMBED, threshold=0.9)
        assert flags == [False, False, False]

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            flag_redundant(["a", "b", "c"], ABSTRACT, EMBED, threshold=0.0)

    def test_wrong_count_rejected(self):
        with pytest.raises(ValueError, match="3 angles"):
            flag_redundant(["a", "b"], ABSTRACT, EMBED)


class TestGenerateAngles:
    def test_fixture_completion_flows_through(self):
        art = article(abstract=ABSTRACT)
        provider = FixedAngleProvider("1. First angle\n2. Second angle\n3. Third angle")
        result = generate_angles(art, provider, EMBED)
        assert result.angles == ("First angle", "Second angle", "Third angle")
        assert result.article_id == art.id
        assert result.prompt_text == build_prompt(art)
        assert result.params == GenerationParams()
        assert art.angle_cache is result

    def test_cache_hit_skips_provider(self):
        art = article(abstract=ABSTRACT)
        provider = FixedAngleProvider("1. A1\n2. A2\n3. A3")
        first = generate_angles(art, provider, EMBED)
        second = generate_angles(art, provider, EMBED)
        assert provider.calls == 1
        assert second == first

    def test_fresh_bypasses_cache(self):
        art = article(abstract=ABSTRACT)
        provider = FixedAngleProvider("1. A1\n2. A2\n3. A3")
        generate_angles(art, provider, EMBED)
        generate_angles(art, provider, EMBED, fresh=True)
        assert provider.calls == 2

    def test_incomplete_completion_errors_and_leaves_no_cache(self):
        art = article(abstract=ABSTRACT)
        provider = FixedAngleProvider("1. only\n2. two lines")
        with pytest.raises(IncompleteGenerationError):
            generate_angles(art, provider, EMBED)
        assert art.angle_cache is None

    def test_stub_provider_end_to_end_deterministic(self):
        art1 = article(abstract=ABSTRACT)
        art2 = article(abstract=ABSTRACT)
        s1 = generate_angles(art1, StubAngleProvider(), EMBED)
        s2 = generate_angles(art2, StubAngleProvider(), EMBED)
        assert s1.angles == s2.angles
        assert s1.redundant_flags == s2.redundant_flags
        assert len(set(s1.angles)) == 3

    def test_angle_set_json_round_trip(self):
        art = article(abstract=ABSTRACT)
        result = generate_angles(art, StubAngleProvider(), EMBED)
        assert AngleSet.from_json_dict(result.to_json_dict()) == result


class TestStubAngleProvider:
    def test_deterministic_per_prompt_and_params(self):
        p1, p2 = StubAngleProvider(), StubAngleProvider()
        prompt = build_prompt(article(abstract=ABSTRACT))
        assert p1.complete(prompt, GenerationParams()) == p2.complete(prompt, GenerationParams())

    def test_params_change_completion(self):
        provider = StubAngleProvider()
        prompt = build_prompt(article(abstract=ABSTRACT))
        a = provider.complete(prompt, GenerationParams())
        b = provider.complete(prompt, GenerationParams(temperature=0.1))
        assert a != b

    def test_always_three_parseable_lines(self):
        provider = StubAngleProvider()
        for abstract in (ABSTRACT, "Tiny text.", "Another abstract about lasers and sensors."):
            completion = provider.complete(build_prompt(article(abstract=abstract)), GenerationParams())
            assert len(parse_angles(completion)) == 3


class TestRateLimiter:
    def test_first_slot_free_then_spaced(self):
        limiter = RateLimiter(per_minute=60)  # 1s interval
        assert limiter.reserve() == 0.0
        wait = limiter.reserve()
        assert 0.0 < wait <= 1.0

    def test_rejects_nonpositive_budget(self):
        with pytest.raises(ValueError):
            RateLimiter(0)
