"""Walkthrough: the full CLI pipeline feeding a live API server.

Builds a throwaway data directory via the same entry points as the `cnd`
command, starts the REST server on a free port with stub providers, and
issues the queries a journalist's console would.

Run with:  python3 demos/06_pipeline_and_api.py
"""

import json
import tempfile
import threading
import time
from pathlib import Path

import requests
import uvicorn

from cnd.angles import StubAngleProvider
from cnd.cli import main as cnd
from cnd.relevance import StubEmbeddingProvider
from cnd.server import create_app

FEED = """<?xml version="1.0" encoding="UTF-8"?>
<feed>
{}
</feed>
""".format(
    "\n".join(
        "<record><id>2206.{i:05d}</id><created>2022-06-{d:02d}</created>"
        "<title>{t}</title><abstract>{a}</abstract>"
        "<categories>cs.LG</categories></record>".format(
            i=i,
            d=1 + 3 * i,
            t=t,
            a=a,
        )
        for i, (t, a) in enumerate(
            [
                ("Cooling data centers", "Reinforcement learning cuts cooling energy use in live data centers."),
                ("Folding proteins", "Graph networks predict protein folding pathways faster than solvers."),
                ("Auditing rankings", "A crowdsourced audit reveals bias in job recommendation rankings."),
                ("Reading the city", "Satellite imagery maps urban heat islands at street resolution."),
                ("Tiny speech chips", "A low-power chip brings speech recognition to hearing aids."),
                ("Brittle classifiers", "Adversarial examples still fool medical imaging classifiers."),
            ]
        )
    )
)

ITEMS = [
    {"item_id": "w0", "title": "Edge AI", "body": "Tiny chips run speech models on device.", "published_date": "2021-07-01"},
    {"item_id": "w1", "title": "Cool servers", "body": "Machine learning tunes data center cooling.", "published_date": "2021-07-02"},
    {"item_id": "w2", "title": "Protein race", "body": "Software predicts protein structures overnight.", "published_date": "2021-07-03"},
    {"item_id": "w3", "title": "Audit season", "body": "Researchers audit recommendation rankings for bias.", "published_date": "2021-07-04"},
]

TAXONOMY = "learning\teasy\ndata\teasy\nprotein\tmedium\nadversarial\thard\nsatellite\teasy\nspeech\teasy\n"


def run_pipeline(workdir: Path) -> Path:
    data_dir = workdir / "data"
    (workdir / "feed.xml").write_text(FEED)
    (workdir / "wired.ndjson").write_text("".join(json.dumps(x) + "\n" for x in ITEMS))
    (workdir / "taxonomy.tsv").write_text(TAXONOMY)
    (workdir / "labels.ndjson").write_text(
        "".join(
            json.dumps({"article_id": f"2206.{i:05d}", "score": s}) + "\n"
            for i, s in enumerate([85.0, 70.0, 60.0, 45.0, 80.0, 30.0])
        )
    )

    base = ["--data-dir", str(data_dir)]
    for argv in (
        ["init"],
        ["ingest", "arxiv", "--input", str(workdir / "feed.xml")],
        ["ingest", "outlet", "--outlet", "wired", "--input", str(workdir / "wired.ndjson")],
        ["features", "--taxonomy", str(workdir / "taxonomy.tsv")],
        ["train", "--labels", str(workdir / "labels.ndjson"), "--seed", "3", "--trees", "20"],
        ["score"],
        ["embed", "--provider", "stub", "--dim", "64", "--seed", "0"],
        ["angles", "--all", "--provider", "stub", "--dim", "64", "--seed", "0"],
    ):
        assert cnd([*argv, *base]) == 0
    return data_dir


def start_server(data_dir: Path):
    app = create_app(
        data_dir,
        embed_provider=StubEmbeddingProvider(dim=64, seed=0),
        angle_provider=StubAngleProvider(),
    )
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    return server, thread, f"http://127.0.0.1:{port}"


def main():
    with tempfile.TemporaryDirectory() as tmp:
        print("== Running the ingestion/scoring pipeline ==")
        data_dir = run_pipeline(Path(tmp))

        print("\n== Serving and querying ==")
        server, thread, base_url = start_server(data_dir)
        try:
            page = requests.get(f"{base_url}/articles", params={"min_news": 50}).json()
            print(f"articles with newsworthiness >= 50: {page['total_matches']}")
            for item in page["items"]:
                print(f"  {item['newsworthiness']:5.1f}  {item['title']}")

            ranked = requests.get(
                f"{base_url}/articles",
                params={"rank_by": "outlet_relevance", "outlets": "wired"},
            ).json()
            print("\nranked by relevance to WIRED:")
            for item in ranked["items"][:3]:
                print(f"  {item['outlet_relevance']:+.3f}  {item['title']}")
                if item["angles"]:
                    print(f"          first angle: {item['angles'][0]}")

            outlets = requests.get(f"{base_url}/outlets").json()
            embedded = [o["outlet_id"] for o in outlets if o["embedded"]]
            print(f"\n{len(outlets)} outlets on the roster; embedded corpora: {embedded}")

            about = requests.get(f"{base_url}/about").json()
            print("transparency sections: " + ", ".join(s["topic"] for s in about["sections"]))
        finally:
            server.should_exit = True
            thread.join(timeout=5)
        print("\nserver stopped; pipeline artifacts were in a temporary directory")


if __name__ == "__main__":
    main()
