"""Walkthrough: embeddings, cosine similarity, and top-decile outlet relevance.

Run with:  python3 demos/03_outlet_relevance.py
"""

import numpy as np

from cnd.corpus import OutletProfile
from cnd.relevance import (
    StubEmbeddingProvider,
    cosine,
    multi_outlet_relevance,
    outlet_relevance,
)

provider = StubEmbeddingProvider(dim=512, seed=0)

print("== Cosine similarity over stub embeddings ==")
texts = [
    "Robots learn to cook rice with reinforcement learning",
    "Reinforcement learning teaches robots kitchen skills",
    "Quarterly earnings beat analyst expectations",
]
vectors = provider.embed(texts)
print(f"similar pair:   {cosine(vectors[0], vectors[1]):+.3f}")
print(f"unrelated pair: {cosine(vectors[0], vectors[2]):+.3f}")

print("\n== Outlet relevance: average of the top decile ==")
article_text = "A new chip runs speech recognition on a hearing aid battery."
wired_items = [
    "Speech recognition chips shrink to wearable scale",
    "Hearing aids get smarter with on-device audio models",
    "The best laptops we reviewed this spring",
    "Quantum computing inches toward error correction",
    "Layoffs hit another social media giant",
    "On-device assistants promise privacy gains",
    "A buyer's guide to mechanical keyboards",
    "Batteries are the hidden bottleneck of wearables",
    "Streaming services raise prices again",
    "Silicon startups chase low-power audio",
    "Inside the rise of edge inference hardware",
    "What to know about tiny machine learning",
]
outlet = OutletProfile(
    outlet_id="wired",
    name="WIRED",
    url="https://www.wired.com/",
    outlet_type="science_tech_news",
    item_vectors=np.vstack([v for v in provider.embed(wired_items)]),
    vector_ids=[f"w{i}" for i in range(len(wired_items))],
)
[article_vec] = provider.embed([article_text])
result = outlet_relevance(article_vec, outlet, article_id="demo")
print(f"{result.n_items} items -> k = {result.k_used} (floor(n/10), at least 1)")
print(f"outlet relevance score = {result.score:+.3f}")
print("the score reflects the article's nearest coverage niche, not the whole corpus")

print("\n== Averaging across several selected outlets ==")
other = OutletProfile(
    outlet_id="salon",
    name="Salon",
    url="https://www.salon.com/",
    outlet_type="general_news",
    item_vectors=np.vstack(
        provider.embed(
            [
                "An essay on modern work culture",
                "Politics of the streaming era",
                "Why celebrity memoirs dominate bestseller lists",
            ]
        )
    ),
    vector_ids=["s0", "s1", "s2"],
)
per_outlet = [result, outlet_relevance(article_vec, other, article_id="demo")]
for r in per_outlet:
    print(f"  {r.outlet_id:>6}: {r.score:+.3f} (k={r.k_used} of {r.n_items})")
print(f"combined (unweighted mean): {multi_outlet_relevance(per_outlet):+.3f}")
