"""Walkthrough: parsing a preprint feed, cleaning outlet text, and persistence.

Run with:  python3 demos/01_corpus_ingestion.py
"""

import tempfile
from datetime import date
from pathlib import Path

from cnd.corpus import (
    CorpusStore,
    OutletNewsItem,
    boilerplate_lines,
    clean_news_text,
    load_corpus,
    parse_preprint_feed,
    partition_by_date,
    save_corpus,
)
from cnd.roster import seed_roster

FEED = b"""<?xml version="1.0" encoding="UTF-8"?>
<feed>
  <record>
    <id>2201.00001</id><created>2022-01-03</created>
    <title>Robots   learn
      to cook</title>
    <abstract>We teach robots to cook rice. It works well.</abstract>
    <categories>cs.RO cs.LG</categories>
  </record>
  <record>
    <id>2112.00009</id><created>2021-12-20</created>
    <title>Consensus bounds</title>
    <abstract>New lower bounds for distributed consensus.</abstract>
    <categories>cs.DC</categories>
  </record>
  <record>
    <id>2201.00002</id><created>2022-01-04</created>
    <title>Missing abstract, will be skipped</title>
    <categories>cs.LG</categories>
  </record>
</feed>
"""

print("== Parsing a harvest feed ==")
parsed = parse_preprint_feed(FEED)
print(f"parsed {len(parsed.records)} records, skipped {parsed.skipped}")
for rec in parsed.records:
    print(f"  {rec.id} [{rec.primary_category}] {rec.title!r} ({rec.published_date})")

print("\n== Cleaning outlet text ==")
bodies = [
    "Big robot story today.\nSubscribe to our newsletter\nMore details inside.",
    "Chips get faster.\nSubscribe to our newsletter",
    "A quieter piece with no ads.",
]
boilerplate = boilerplate_lines(bodies, min_fraction=0.5)
print(f"boilerplate detected across {len(bodies)} items: {boilerplate}")
print("cleaned first body:")
print("  " + clean_news_text(bodies[0], boilerplate).replace("\n", "\n  "))

print("\n== Partitioning by date ==")
with tempfile.TemporaryDirectory() as tmp:
    store = CorpusStore(data_dir=Path(tmp) / "data")
    for rec in parsed.records:
        store.add_article(rec)
    seed_roster(store)
    store.add_outlet_items(
        "wired",
        [
            OutletNewsItem("wired", f"w{i}", f"Item {i}", clean_news_text(b, boilerplate))
            for i, b in enumerate(bodies)
        ],
    )
    before, after = partition_by_date(store, date(2022, 1, 1))
    print(f"train partition (< 2022-01-01): {[a.id for a in before]}")
    print(f"study partition (>= 2022-01-01): {[a.id for a in after]}")

    print("\n== Round-tripping through NDJSON files ==")
    save_corpus(store)
    reloaded = load_corpus(store.data_dir)
    print(f"reloaded {len(reloaded.articles)} articles, {len(reloaded.outlets)} outlets")
    print(f"field-for-field identical: {reloaded.articles == store.articles}")
    listing = sorted(p.relative_to(store.data_dir).as_posix() for p in store.data_dir.rglob("*") if p.is_file())
    print("files written:", ", ".join(listing))
