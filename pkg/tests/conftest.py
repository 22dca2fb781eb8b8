"""Shared fixtures: a small fully-populated corpus on disk."""

from datetime import date, timedelta

import pytest

from cnd.corpus import ArticleRecord, CorpusStore, OutletNewsItem, save_corpus
from cnd.relevance import StubEmbeddingProvider, embed_matrix
from cnd.roster import seed_roster

ABSTRACTS = [
    "We study graph neural networks for molecular property prediction and screening.",
    "A new theorem shows limits of distributed consensus under partial synchrony.",
    "Large language models can draft code review comments with human oversight.",
    "Satellite imagery and deep learning map urban heat islands at street scale.",
    "We present a low-power chip design for on-device speech recognition.",
    "Adversarial examples reveal brittleness in medical imaging classifiers.",
    "Crowdsourced audits uncover ranking bias in job recommendation platforms.",
    "Quantum error correction codes approach practical overhead thresholds.",
    "Reinforcement learning schedules data center cooling to cut energy use.",
    "Privacy-preserving federated analytics for hospital readmission prediction.",
    "Robots learn household manipulation tasks from a handful of demonstrations.",
    "A benchmark for evaluating factual consistency of abstractive summarizers.",
]

NEWS_BODIES = {
    "wired": [
        "Chipmakers race to put speech recognition on tiny devices.",
        "How graph learning is changing drug discovery pipelines.",
        "Data centers turn to machine learning to cool servers.",
        "Robots are finally learning to fold laundry from demonstrations.",
        "Quantum computing inches toward error-corrected machines.",
    ],
    "techcrunch": [
        "Startup raises funding to automate code review with language models.",
        "Federated analytics startups court hospital networks.",
        "Job platforms face scrutiny over algorithmic ranking bias.",
        "Satellite analytics firm maps city heat for urban planners.",
    ],
}


def build_corpus(data_dir, n_articles=12, dim=64, seed=0, scores=True) -> CorpusStore:
    """Write a deterministic small corpus (articles, outlets, vectors) to disk."""
    store = CorpusStore(data_dir=data_dir)
    seed_roster(store)
    for i in range(n_articles):
        abstract = ABSTRACTS[i % len(ABSTRACTS)]
        article = ArticleRecord(
            id=f"2201.{i:05d}",
            title=f"Paper {i}: {abstract.split()[2]} study",
            abstract=abstract,
            url=f"https://arxiv.org/abs/2201.{i:05d}",
            primary_category="cs.LG" if i % 2 == 0 else "cs.CL",
            categories=["cs.LG", "cs.AI"] if i % 2 == 0 else ["cs.CL"],
            published_date=date(2022, 1, 5) + timedelta(days=11 * i),
            newsworthiness=float((i * 17) % 101) if scores else None,
        )
        store.add_article(article)

    provider = StubEmbeddingProvider(dim=dim, seed=seed)
    for outlet_id, bodies in NEWS_BODIES.items():
        items = [
            OutletNewsItem(outlet_id, f"{outlet_id}-{j}", f"Item {j}", body, date(2021, 6, 1))
            for j, body in enumerate(bodies)
        ]
        store.add_outlet_items(outlet_id, items)
        outlet = store.outlets[outlet_id]
        outlet.item_vectors = embed_matrix(provider, [f"{i.title} {i.body}" for i in items])
        outlet.vector_ids = [i.item_id for i in items]

    articles = sorted(store.articles.values(), key=lambda a: a.id)
    store.article_vectors = embed_matrix(
        provider, [f"{a.title} {a.abstract}" for a in articles]
    )
    store.article_vector_ids = [a.id for a in articles]
    save_corpus(store)
    return store


@pytest.fixture
def demo_data_dir(tmp_path):
    data_dir = tmp_path / "data"
    build_corpus(data_dir)
    return data_dir
