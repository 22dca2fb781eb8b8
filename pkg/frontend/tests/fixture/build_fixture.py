#!/usr/bin/env python3
"""Build a deterministic stub-mode data directory for the UI test server.

Usage: build_fixture.py <data_dir>
"""

import sys
from datetime import date, timedelta
from pathlib import Path

from cnd.angles import StubAngleProvider, generate_angles
from cnd.corpus import ArticleRecord, CorpusStore, OutletNewsItem, save_corpus
from cnd.relevance import StubEmbeddingProvider, embed_matrix
from cnd.roster import seed_roster

ABSTRACTS = [
    "Graph neural networks accelerate molecular property screening for chemists.",
    "New bounds tighten distributed consensus under partial synchrony.",
    "Language models draft code review comments that humans then vet.",
    "Satellite imagery maps urban heat islands at street resolution.",
    "A low-power chip brings always-on speech recognition to wearables.",
    "Adversarial examples still fool deployed medical imaging classifiers.",
    "Crowdsourced audits reveal ranking bias in job recommendation systems.",
    "Quantum error correction overhead approaches practical thresholds.",
    "Reinforcement learning cuts cooling energy in production data centers.",
    "Federated analytics predict hospital readmissions without sharing records.",
    "Robots learn household manipulation from a handful of demonstrations.",
    "A benchmark probes factual consistency of abstractive summarizers.",
]

ITEMS = {
    "wired": [
        "Speech chips shrink to hearing-aid scale.",
        "Graph learning reshapes drug discovery.",
        "Data centers cool themselves with machine learning.",
        "Robots take on household chores in the lab.",
        "Quantum hardware chases error correction.",
    ],
    "techcrunch": [
        "Startup automates code review with language models.",
        "Federated analytics courts hospital networks.",
        "Job platforms face ranking bias audits.",
        "Satellite analytics maps city heat for planners.",
    ],
}


def main() -> int:
    data_dir = Path(sys.argv[1])
    store = CorpusStore(data_dir=data_dir)
    seed_roster(store)

    embed = StubEmbeddingProvider(dim=64, seed=0)
    for i, abstract in enumerate(ABSTRACTS):
        article = ArticleRecord(
            id=f"2203.{i:05d}",
            title=f"Fixture paper {i}: {abstract.split()[0]} {abstract.split()[1]}",
            abstract=abstract,
            url=f"https://arxiv.org/abs/2203.{i:05d}",
            primary_category="cs.LG",
            categories=["cs.LG", "cs.AI"],
            published_date=date(2022, 3, 1) + timedelta(days=7 * i),
            newsworthiness=float((i * 9 + 10) % 101),  # spans both sides of 70
        )
        if i % 2 == 0:  # leave odd articles uncached for on-demand generation
            generate_angles(article, StubAngleProvider(), embed)
        store.add_article(article)

    for outlet_id, bodies in ITEMS.items():
        items = [
            OutletNewsItem(outlet_id, f"{outlet_id}-{j}", f"Story {j}", body, date(2021, 8, 1))
            for j, body in enumerate(bodies)
        ]
        store.add_outlet_items(outlet_id, items)
        outlet = store.outlets[outlet_id]
        outlet.item_vectors = embed_matrix(embed, [f"{x.title} {x.body}" for x in items])
        outlet.vector_ids = [x.item_id for x in items]

    articles = sorted(store.articles.values(), key=lambda a: a.id)
    store.article_vectors = embed_matrix(embed, [f"{a.title} {a.abstract}" for a in articles])
    store.article_vector_ids = [a.id for a in articles]

    save_corpus(store)
    print(f"fixture corpus written to {data_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
