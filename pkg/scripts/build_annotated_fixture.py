#!/usr/bin/env python3
"""Regenerate the bundled annotated disclosure fixtures.

Writes src/affaudit/data/annotated_sentences.jsonl (per-sentence detection
and compensation labels) and src/affaudit/data/relationship_cases.json
(description-level relationship geometry cases). Labels here are the frozen
ground truth the classifier tests grade against; edit the lists, rerun, and
review the diff.
"""

from __future__ import annotations

import json
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "affaudit" / "data"

# ---------------------------------------------------------------------------
# Disclosure-positive sentences, compensation Clear: explicit first-person
# monetary predicate.
CLEAR = [
    "I earn a small commission if you buy through the links below.",
    "As an Amazon Associate I earn from qualifying purchases.",
    "If you click on this link and purchase a product, I get a small commission at no cost to you.",
    "We receive a percentage of every sale made through our links.",
    "Buying through my links earns me a commission.",
    "This channel gets a small cut when you use the code below.",
    "I am compensated for purchases made through these links.",
    "I get paid when you shop using my links.",
    "We are paid a commission on qualifying orders.",
    "Purchases made via these links earn me a small fee.",
    "I make a little money every time someone orders through my link.",
    "When you buy from these links, I receive a kickback from the store.",
    "Using the links below earns us a commission from the retailer.",
    "I earn revenue from purchases made through the gear links.",
    "Every order placed with my code pays me a percentage.",
    "The channel receives compensation for purchases made via these links.",
    "I get a commission on anything you grab from the list below.",
    "We earn a small commission when you book through our link.",
    "Full disclosure, I receive a cut of each sale from these links.",
    "Shopping with these links means I earn a small percentage of the sale.",
    "I will receive a commission if you sign up through the link.",
    "Heads up, I get compensated when you purchase through the links in this description.",
    "These links pay me a small commission, which keeps the channel running.",
    "I do earn a fee from the store when you use my checkout link.",
    "My wallet gets a tiny kickback when you order with the code PINES.",
    "Clicking these links and buying earns the channel a commission.",
    "We make a small amount of money from every purchase you complete through them.",
    "The store pays me a referral fee whenever you order with my link.",
    "Qualifying purchases through the storefront earn me a commission from Amazon.",
    "Yes, I get a percentage when you order through the site below.",
    "I receive a small payment for each subscription started with my link.",
    "Purchases you make after clicking give me a modest commission.",
    "I'm paid a commission by the brands when these links are used.",
    "Our team earns a referral commission on every completed checkout.",
    "Buying gear through the list below sends a small commission my way.",
    "I pocket a small percentage when you use the discount code.",
    "The affiliate links below earn me a commission on each sale.",
    "As an affiliate I receive compensation for purchases made through this page.",
    "I earn money from the links marked with an asterisk.",
    "When you order within 24 hours of clicking, I still get my commission.",
    "Each purchase through the kit page earns us a small cut.",
    "I was paid a flat fee to feature this product in the video.",
    "The brand compensates me for every unit sold through my link.",
    "We get a commission from the marketplace when you buy via our storefront.",
    "I benefit financially when you shop through the links provided.",
    "Any purchase through these links results in a small commission for me.",
    "I get a referral bonus in cash when you join with my link.",
    "Ordering through the link below pays me a small percentage of your total.",
    "These product links earn me commission as part of the store's partner program.",
    "My family's channel receives a commission check for link purchases each month.",
]

# Compensation Ambiguous: support-style language, no monetary predicate.
AMBIGUOUS = [
    "Support the channel through these links.",
    "Using these links helps the channel out.",
    "Shopping through my links supports what we do here.",
    "It costs you nothing extra and helps us keep making videos.",
    "Every click helps support future videos.",
    "Buying through the links below is a great way to support me.",
    "Using my code supports the channel at no extra cost to you.",
    "These links help keep the lights on around here.",
    "If you want to support us, shop through the links in the description.",
    "Your purchases through these links go a long way toward supporting the show.",
    "Grabbing gear through the list below helps the channel grow.",
    "Shopping with our code is the easiest way to help us out.",
    "The links below support the channel when you use them.",
    "Using the storefront link helps me keep producing these guides.",
    "At no additional cost to you, these links help support my work.",
    "Every order through the description links helps this little channel.",
    "Want to help the channel? Use the links below when you shop.",
    "Purchases made through my page support the podcast.",
    "Clicking through before you buy really helps us.",
    "Shopping via the links is an easy, free way to support the series.",
    "Your support through these links keeps the tutorials coming.",
    "Use the code below to support the stream while you shop.",
    "Buying through the link helps me at no extra charge to you.",
    "These links are an easy way to give back to the channel.",
    "Ordering through the description helps support my caffeine habit.",
    "Link purchases help fund the next build project.",
    "It helps the channel a ton when you use the gear links.",
    "Support my work by shopping through the storefront below.",
    "The easiest way to support this channel is through the product links.",
    "Using these links costs you nothing and means the world to us.",
    "Each purchase through the list quietly supports the channel.",
    "Help keep this series alive by using the links when you shop.",
    "Every sale through the page supports independent reviews like this one.",
    "Shopping through my page is appreciated and supports the channel.",
    "If these videos help you, using the links is a nice way to return the favor.",
    "Checkout through the description links to support future uploads.",
    "Our gear page supports the channel whenever you order from it.",
    "Those links below help the channel when you do your shopping.",
    "Using my storefront helps support everything we make here.",
    "A purchase through the link is the best way to say thanks.",
]

# Compensation None: the relationship is stated but nothing explains payment.
STATEMENT = [
    "This is an affiliate link.",
    "These are affiliate links.",
    "Some of the links below are affiliate links.",
    "Links in this description may be affiliate links.",
    "This video is sponsored by Raycon.",
    "#ad",
    "#affiliate",
    "Paid partnership with HelloFresh.",
    "This post contains affiliate links.",
    "Today's video is sponsored by Squarespace.",
    "The description contains affiliate links.",
    "Affiliate links are used in this description.",
    "This description includes some affiliate links.",
    "Sponsored content.",
    "This segment is sponsored.",
    "The gear list below contains affiliate links.",
    "Most of the links above are affiliate links.",
    "Certain links in this post are affiliate links.",
    "#sponsored",
    "This video contains a paid promotion.",
    "In partnership with Audible.",
    "The first link is an affiliate link.",
    "Product links may include affiliate links.",
    "My affiliate links are marked with a star.",
    "Video sponsored by NordVPN.",
    "These partner links are provided by the brand.",
    "This episode features a paid ad read.",
    "Thanks to today's sponsor, Skillshare.",
    "Affiliate link: see below.",
    "Big thanks to the sponsor of this video, Factor.",
]

# Non-disclosure sentences. The traps subsections contain the markers that
# substring matching trips over: negations, affiliate-program promos, and the
# art-commission sense of "commission".
NEGATION_TRAPS = [
    "This video is not sponsored.",
    "This is not a sponsored video.",
    "None of these links are affiliate links.",
    "I don't earn anything from these links.",
    "I do not get paid if you click these.",
    "No affiliate links here, just stuff I like.",
    "This review is completely unsponsored.",
    "There is no sponsorship involved in this video.",
    "Not sponsored, I bought everything myself.",
    "This channel is not affiliated with the manufacturer.",
    "I receive no compensation for mentioning these products.",
    "We are not affiliated with any of the stores linked below.",
    "These are not affiliate links, just direct links to the products.",
    "I make no money from anything in the description.",
    "This one is not a paid promotion.",
    "No sponsorship, no affiliate links, no strings attached.",
    "The links below are provided without compensation of any kind.",
    "I wasn't paid to make this video.",
    "Nothing in this video is sponsored content.",
    "I don't receive a commission from these stores.",
]

PROMO_TRAPS = [
    "Join the Fiverr Affiliate Program today!",
    "Sign up to become an affiliate on my website.",
    "Apply to our affiliate program and earn 20% per referral.",
    "Become a partner and earn commissions on every sale you refer.",
    "Register for the affiliate network through the careers page.",
    "You can join our affiliate program from the link on our site.",
    "Enroll in the creator affiliate program to monetize your own videos.",
    "Want to earn with us? Our affiliate program is open to everyone.",
    "Sign up as an affiliate and get your own discount code to share.",
    "Apply now to become a brand affiliate for the summer line.",
]

ART_TRAPS = [
    "Commission an artwork from me!",
    "My commissions are open this month.",
    "I'm taking art commissions again, details below.",
    "Commissioned paintings ship within two weeks.",
    "DM me to commission a portrait of your pet.",
    "Commission slots for custom emotes open Friday.",
    "She finally commissioned that mural for the studio wall.",
    "The gallery commissioned three new pieces for the exhibit.",
]

PLAIN_NEGATIVES = [
    "Thanks for watching!",
    "New camera gear arriving next week.",
    "Drop a like if this helped you.",
    "Subscribe for weekly uploads.",
    "Timestamps are in the pinned comment.",
    "Full recipe is on the blog.",
    "See you all in the next video.",
    "Let me know your thoughts in the comments.",
    "This build took about three weekends to finish.",
    "The firmware update fixed the overheating issue.",
    "My editing setup tour is coming soon.",
    "Huge thanks to everyone who came to the meetup.",
    "The giveaway winners are announced at the end.",
    "Here is every tool I used in this project.",
    "Links to everything are in the description.",
    "All the products shown are listed below.",
    "Check the description for the full gear list.",
    "Today we're reviewing the new mirrorless lineup.",
    "The comparison chart is on screen now.",
    "I bought this with my own money last spring.",
    "Shipping took about two weeks from the factory.",
    "The battery lasted nine hours in my test.",
    "Chapters: intro, unboxing, testing, verdict.",
    "Shoutout to my brother for filming this one.",
    "We hiked twelve miles to get this shot.",
    "The museum section starts at minute four.",
    "Behind the scenes footage is on the second channel.",
    "I'll pin the best question from the comments.",
    "Filmed on location in northern Portugal.",
    "The soundtrack is from the free library below.",
    "My keyboard is the one from last month's video.",
    "Turn on captions for the translation.",
    "This is part two of the restoration series.",
    "The schematic is downloadable from my site.",
    "Big milestone this week, we passed 100k subscribers.",
    "Comment which city we should visit next.",
    "The drone footage was shot at sunrise.",
    "I tested all five blenders for a week each.",
    "Warranty covers the motor for two years.",
    "The patch notes are linked in the description.",
    "Leave your speedrun times in the comments.",
    "Grab the free preset pack from the link below.",
    "The interview segment was recorded remotely.",
    "My workout plan is available on the site.",
    "This trail is open from May through October.",
    "The error at 8:12 was fixed in post.",
    "Thanks to the library for letting us film inside.",
    "All measurements are in the spreadsheet below.",
    "I'll stream the finale live on Friday.",
    "The cat makes an appearance at 6:40.",
    "Use headphones for the spatial audio section.",
    "Raw files are available for channel members.",
    "The repair cost less than twenty dollars in parts.",
    "Weather delayed the launch by two days.",
    "My opinions on this lens changed after a month.",
    "The tutorial assumes you know basic soldering.",
    "Vote in the community poll for the next topic.",
    "The map of the route is in the description.",
    "Everything in this video was purchased at retail price.",
    "The prototype failed twice before this run.",
    "Translations are community submitted.",
    "The bridge scene was filmed in one take.",
    "I archived the old series on the second channel.",
    "Merch restock happens on the first of the month.",
    "The quiz answers are at the end of the video.",
    "This engine has done 200,000 miles.",
    "The firmware rollback guide is linked below.",
    "My camera settings are f/4, ISO 200, 1/250.",
    "The plant doubled in size in six weeks.",
    "Entry to the park was free on Sunday.",
    "The keyboard shortcuts are listed on screen.",
    "I compared prices across six retailers for this review.",
    "The recall notice only affects the 2019 model.",
    "Our charity stream raised eight thousand dollars.",
    "The neighborhood tour starts after the intro.",
    "A replacement screen costs about forty dollars.",
    "The update dropped while I was editing this.",
    "Everything is reassembled by the end, I promise.",
    "The bloopers are after the credits.",
    "My dog stars in the intro again.",
    "This recipe serves four generously.",
    "The trailhead parking fills up by 8 am.",
    "I used the same settings from the studio tour.",
    "The kit lens surprised me in low light.",
    "Check minute ten for the stress test results.",
    "The library scene needed three lighting setups.",
    "New episodes every other Thursday.",
    "The source code walkthrough begins at 12:30.",
    "I left the mistakes in for authenticity.",
    "The ferry crossing takes about ninety minutes.",
    "Print settings: 0.2 mm layers, 15% infill.",
    "The antique shop let us film the restoration.",
    "Winners will be contacted by email.",
    "The cosplay took four months to assemble.",
    "Today's puzzle comes from a viewer submission.",
    "The garden update is at the end as usual.",
    "I finally fixed the squeak in the pedal.",
    "The studio reorganization video is next week.",
    "Both monitors are running at 144 Hz.",
    "The paint needed two coats to cover evenly.",
    "Fuel economy averaged 38 mpg on the trip.",
    "The workshop was too loud for voiceover.",
    "I'll answer the top comments in a follow-up.",
    "The calibration chart is printable at home.",
    "Season two starts filming in March.",
    "The lighthouse is only open in summer.",
    "My notes from the conference are linked below.",
    "The transmission swap took a full weekend.",
    "Slides from the talk are on my site.",
    "The bee hotel filled up within a month.",
    "Rendering this animation took forty hours.",
    "The original manual is scanned in the description.",
    "I tuned the guitar down a half step for this cover.",
    "Replacement filters arrive every three months.",
    "The marathon training plan is in the pinned comment.",
    "The glitch happens only on the older firmware.",
    "The tide pools are best visited at low tide.",
    "A big storm cut our filming day short.",
    "The sequel review is already in the works.",
    "The sourdough starter is ten years old.",
    "My favorite take is the one we kept.",
    "Studio tour requests go in the comments.",
    "The kart setup sheet is in the description.",
    "I measured twice and still cut it wrong.",
    "The museum replica is astonishingly accurate.",
    "The night sky timelapse used 900 frames.",
    "Discount codes from viewers don't work on this channel.",
    "The orchestra recording session starts the video.",
    "Every clip in the montage is from this year.",
    "The repair manual contradicts itself on torque specs.",
    "Our community garden plot is thriving.",
    "The unboxing starts right after the intro.",
    "This project used up all my scrap plywood.",
    "The water test lasted 48 hours without a leak.",
    "The bookshelf build plans are free to download.",
    "partner links are explained in my FAQ video.",
]

# Disclosure positives the keyword list misses: no marker substring at all.
KEYWORD_MISS_POSITIVES = [
    "I get a small kickback when you shop through these links.",
    "Buying through my storefront earns me a little money.",
    "I receive a percentage of each sale from the gear page.",
    "The store pays me a referral fee for each completed order.",
    "We get a cut of every purchase made through the description.",
    "I'm paid a small fee when you order with my code.",
    "Each checkout through my page earns me a bit of revenue.",
    "I earn a small percentage whenever you buy from the list.",
]

# Borderline cases the rules are expected to miss: disclosure meaning without
# any lexicon pattern. They cap the reference classifier's recall honestly.
RULE_MISS_POSITIVES = [
    "The usual arrangement with the store applies to these links.",
    "You know the deal with the links by now.",
    "Standard disclosure stuff applies to everything below.",
    "The brand looks after me when you use that checkout page.",
    "Anything you grab from the shelf link comes back around to me.",
    "The shop takes care of the channel for every order you place.",
]

# And negatives the rules may flag: compensation-adjacent phrasing about
# someone else's arrangement.
RULE_FP_NEGATIVES = [
    "Retailers pay influencers a commission for links like these all the time.",
    "Most tech channels earn a commission from links, as explained in my ethics video.",
    "She said the other channel gets paid for every link click, which surprised me.",
    "Creators often receive compensation for product placements in this genre.",
]


def sentence_rows():
    rows = []
    for text in CLEAR:
        rows.append({"text": text, "is_disclosure": True, "compensation": "Clear"})
    for text in AMBIGUOUS:
        rows.append({"text": text, "is_disclosure": True, "compensation": "Ambiguous"})
    for text in STATEMENT:
        rows.append({"text": text, "is_disclosure": True, "compensation": "None"})
    for text in KEYWORD_MISS_POSITIVES:
        rows.append({"text": text, "is_disclosure": True, "compensation": "Clear"})
    for text in RULE_MISS_POSITIVES:
        rows.append({"text": text, "is_disclosure": True, "compensation": None})
    for text in (NEGATION_TRAPS + PROMO_TRAPS + ART_TRAPS + PLAIN_NEGATIVES
                 + RULE_FP_NEGATIVES):
        rows.append({"text": text, "is_disclosure": False, "compensation": None})
    return rows


def relationship_cases():
    """Full descriptions with link geometry and expected relationship labels."""
    cases = []

    def add(name, description, link_specs, expected, vacuous=False):
        links = []
        for url, is_affiliate in link_specs:
            offset = description.index(url)
            links.append([url, offset, is_affiliate])
        cases.append({
            "name": name,
            "description": description,
            "links": links,
            "expected_relationship": expected,
            "expected_vacuous": vacuous,
        })

    add(
        "explicit-line-above",
        "This is a sponsored link for the X200:\nhttps://shop.example.com/x200?aff=a1\n\nMy other videos:\nhttps://youtube.com/watch?v=abc",
        [("https://shop.example.com/x200?aff=a1", True),
         ("https://youtube.com/watch?v=abc", False)],
        "Explicit",
    )
    add(
        "explicit-same-line",
        "Grab it here (affiliate): https://store.example.net/item?ref=z9",
        [("https://store.example.net/item?ref=z9", True)],
        "Explicit",
    )
    add(
        "grouped-block-below",
        "I get compensated when you make purchases through the following links:\nhttps://a.example.com/p?aff=1\nhttps://b.example.com/p?aff=2\nhttps://c.example.com/p?aff=3\n\nSocials:\nhttps://twitter.com/example",
        [("https://a.example.com/p?aff=1", True),
         ("https://b.example.com/p?aff=2", True),
         ("https://c.example.com/p?aff=3", True),
         ("https://twitter.com/example", False)],
        "Grouped",
    )
    add(
        "grouped-block-above",
        "https://a.example.com/p?aff=1\nhttps://b.example.com/p?aff=2\nThe links above are affiliate links and I earn a commission.",
        [("https://a.example.com/p?aff=1", True),
         ("https://b.example.com/p?aff=2", True)],
        "Grouped",
    )
    add(
        "mixed-whole-scope",
        "Some of the links in the description are affiliate links.\nhttps://a.example.com/p?aff=1\nhttps://plain.example.org/article\nhttps://b.example.com/p?aff=2",
        [("https://a.example.com/p?aff=1", True),
         ("https://plain.example.org/article", False),
         ("https://b.example.com/p?aff=2", True)],
        "MixedGroup",
    )
    add(
        "mixed-block-composition",
        "I earn a commission from these links:\nhttps://a.example.com/p?aff=1\nhttps://plain.example.org/article\nhttps://b.example.com/p?aff=2",
        [("https://a.example.com/p?aff=1", True),
         ("https://plain.example.org/article", False),
         ("https://b.example.com/p?aff=2", True)],
        "MixedGroup",
    )
    add(
        "vacuous-no-affiliate-links",
        "These are affiliate links:\nhttps://plain.example.org/a\nhttps://plain.example.org/b",
        [("https://plain.example.org/a", False),
         ("https://plain.example.org/b", False)],
        "Explicit",
        vacuous=True,
    )
    add(
        "vacuous-no-links",
        "I earn a commission from purchases. Thanks for the support.",
        [],
        "Explicit",
        vacuous=True,
    )
    add(
        "distant-disclosure-scopes-all",
        "I earn a small commission on purchases through my links.\n\nChapters:\n00:00 Intro\n01:00 Review\n\nGear:\nhttps://a.example.com/p?aff=1\nhttps://b.example.com/p?aff=2",
        [("https://a.example.com/p?aff=1", True),
         ("https://b.example.com/p?aff=2", True)],
        "Grouped",
    )
    add(
        "distant-disclosure-mixed-overall",
        "I earn a small commission on purchases through my links.\n\nChapters:\n00:00 Intro\n\nLinks:\nhttps://a.example.com/p?aff=1\nhttps://plain.example.org/article",
        [("https://a.example.com/p?aff=1", True),
         ("https://plain.example.org/article", False)],
        "MixedGroup",
    )
    return cases


def main():
    rows = sentence_rows()
    out = DATA_DIR / "annotated_sentences.jsonl"
    out.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows),
                   encoding="utf-8")
    print(f"wrote {out} ({len(rows)} sentences, "
          f"{sum(1 for r in rows if r['is_disclosure'])} positive)")

    cases = relationship_cases()
    out = DATA_DIR / "relationship_cases.json"
    out.write_text(json.dumps(cases, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(cases)} cases)")


if __name__ == "__main__":
    main()
