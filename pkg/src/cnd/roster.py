"""Default outlet roster: the twenty outlets the relevance subsidy targets."""

from __future__ import annotations

from cnd.corpus import OutletProfile

DEFAULT_OUTLETS: tuple[OutletProfile, ...] = (
    OutletProfile("arstechnica", "ArsTechnica", "https://arstechnica.com/", "science_tech_news"),
    OutletProfile("futurism", "Futurism", "https://futurism.com/", "science_tech_news"),
    OutletProfile("newscientist", "NewScientist", "https://www.newscientist.com/", "science_tech_news"),
    OutletProfile("nytimes", "The New York Times", "https://www.nytimes.com/", "general_news"),
    OutletProfile("popsci", "Popular Science", "https://www.popsci.com/", "science_tech_news"),
    OutletProfile("popularmechanics", "Popular Mechanics", "https://www.popularmechanics.com/", "science_tech_news"),
    OutletProfile("quartz", "Quartz", "https://qz.com/", "general_news"),
    OutletProfile("salon", "Salon", "https://www.salon.com/", "general_news"),
    OutletProfile("scienmag", "ScienMag", "https://scienmag.com/", "science_tech_news"),
    OutletProfile("sciam", "Scientific American", "https://www.scientificamerican.com/", "science_tech_news"),
    OutletProfile("statnews", "Stat", "https://www.statnews.com/", "science_tech_news"),
    OutletProfile("techcrunch", "TechCrunch", "https://techcrunch.com/", "tech_news"),
    OutletProfile("techreview", "MIT Technology Review", "https://www.technologyreview.com/", "science_tech_news"),
    OutletProfile("theconversation", "The Conversation", "https://theconversation.com/us", "general_news"),
    OutletProfile("venturebeat", "VentureBeat", "https://venturebeat.com/", "tech_news"),
    OutletProfile("vice", "VICE", "https://www.vice.com/en", "general_news"),
    OutletProfile("vox", "Vox", "https://www.vox.com/", "general_news"),
    OutletProfile("washingtonpost", "The Washington Post", "https://www.washingtonpost.com/", "general_news"),
    OutletProfile("wired", "WIRED", "https://www.wired.com/", "science_tech_news"),
    OutletProfile("theverge", "The Verge", "https://www.theverge.com/", "science_tech_news"),
)


def seed_roster(store) -> int:
    """Add any missing default outlets to the store; returns how many were added."""
    added = 0
    for outlet in DEFAULT_OUTLETS:
        if outlet.outlet_id not in store.outlets:
            store.add_outlet(
                OutletProfile(outlet.outlet_id, outlet.name, outlet.url, outlet.outlet_type)
            )
            added += 1
    return added
