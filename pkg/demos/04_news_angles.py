"""Walkthrough: prompt construction, angle parsing, and redundancy flags.

Run with:  python3 demos/04_news_angles.py
"""

from datetime import date

from cnd.angles import (
    FixedAngleProvider,
    GenerationParams,
    StubAngleProvider,
    build_prompt,
    flag_redundant,
    generate_angles,
    parse_angles,
)
from cnd.corpus import ArticleRecord
from cnd.relevance import StubEmbeddingProvider

article = ArticleRecord(
    id="2201.00077",
    title="Wearable sensors detect early signs of dehydration",
    abstract=(
        "We present a low-cost skin patch that estimates hydration from sweat "
        "chemistry. A trial with 40 athletes shows accurate early warnings."
    ),
    url="https://arxiv.org/abs/2201.00077",
    primary_category="cs.HC",
    categories=["cs.HC", "eess.SP"],
    published_date=date(2022, 1, 20),
)

print("== The generation prompt ==")
prompt = build_prompt(article)
print(prompt[:120] + "...")
print(f"\ndefault sampling parameters: {GenerationParams().to_json_dict()}")

print("\n== Parsing completions in different enumeration styles ==")
for completion in (
    "1. Angle one\n2. Angle two\n3. Angle three",
    "- Dashed one\n- Dashed two\n- Dashed three\n- extra ignored",
    '• "Quoted bullet"\n• Second\n• Third',
):
    print(f"  {completion.splitlines()[0]!r}... -> {parse_angles(completion)}")

print("\n== End-to-end generation with the deterministic stub ==")
embed = StubEmbeddingProvider(dim=512, seed=0)
angle_set = generate_angles(article, StubAngleProvider(), embed)
for angle, flag in zip(angle_set.angles, angle_set.redundant_flags):
    marker = "  [redundant]" if flag else ""
    print(f"  - {angle}{marker}")
print(f"cached on the article: {article.angle_cache is angle_set}")

print("\n== Redundancy flagging ==")
copies = FixedAngleProvider(
    "1. Sweat patch warns athletes before dehydration strikes\n"
    "2. Sweat patch warns athletes before dehydration strikes\n"
    "3. A different take on hydration tech\n"
)
article.angle_cache = None  # force regeneration through the canned provider
flagged = generate_angles(article, copies, embed)
for angle, flag in zip(flagged.angles, flagged.redundant_flags):
    marker = "  [redundant: repeats an earlier angle]" if flag else ""
    print(f"  - {angle}{marker}")

direct = flag_redundant(
    [article.abstract, "Fresh framing one", "Fresh framing two"],
    article.abstract,
    embed,
)
print(f"\nangle equal to the abstract is flagged too: {direct}")
