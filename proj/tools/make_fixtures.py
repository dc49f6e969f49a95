#!/usr/bin/env python3
"""Regenerates the bundled synthetic fixtures under data/.

Everything is derived from a fixed seed, so re-running the script reproduces
the committed files byte for byte.

    python3 tools/make_fixtures.py [--root DIR]
"""

import argparse
import datetime as dt
import json
import random
from pathlib import Path

SEED = 20200330
PERIOD_START = dt.date(2019, 9, 1)
PERIOD_END = dt.date(2019, 12, 31)
COLLECTION_DATE = dt.date(2020, 3, 30)
TARGETED_SHARE = 0.62

GENDERS = ["male", "female"]
AGES = ["13-17", "18-24", "25-34", "35-44", "45-54", "55-64", "65+"]

REGIONS = [
    "Abruzzo", "Aosta Valley", "Apulia", "Basilicata", "Calabria", "Campania",
    "Emilia-Romagna", "Friuli-Venezia Giulia", "Lazio", "Liguria", "Lombardy",
    "Marche", "Molise", "Piedmont", "Sardinia", "Sicily", "Trentino-Alto Adige",
    "Tuscany", "Umbria", "Veneto",
]

MIGRATION_THEMES = [
    "EPU_CATS_MIGRATION_FEAR_FEAR",
    "EPU_CATS_MIGRATION_FEAR_MIGRATION",
    "WB_2836_MIGRATION_POLICIES_AND_JOBS",
    "IMMIGRATION",
    "WB_2837_IMMIGRATION",
    "TAX_FNCACT_IMMIGRANTS",
    "WB_2844_EMIGRATION",
    "TAX_FNCACT_IMMIGRANT",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIC",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRATION",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANT",
    "DISCRIMINATION_IMMIGRATION_ULTRANATIONALIST",
    "HUMAN_RIGHTS_ABUSES_FORCED_MIGRATION",
    "SOC_MASSMIGRATION",
    "DISCRIMINATION_IMMIGRATION_AGAINST_IMMIGRANTS",
    "WB_2204_IN_MIGRATION",
    "TAX_FNCACT_MIGRANT_WORKER",
    "WB_2729_MIGRANT_WORKERS",
    "DISCRIMINATION_IMMIGRATION_ANTI_IMMIGRATION",
    "DISCRIMINATION_IMMIGRATION_ULTRA_NATIONALIST",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_AGAINST_IMMIGRANTS",
    "WB_1602_RETURNING_MIGRANTS",
]

OTHER_THEMES = [
    "TAX_FNCACT_PRESIDENT", "ELECTION", "GENERAL_GOVERNMENT", "ECON_TAXATION",
    "LEADER", "EDUCATION", "HEALTH_PANDEMIC", "ENV_CLIMATECHANGE", "UNEMPLOYMENT",
    "TAX_ETHNICITY_ITALIAN", "SECURITY_SERVICES", "CRIME_COMMON_ROBBERY",
    "WB_696_PUBLIC_SECTOR_MANAGEMENT", "MARITIME", "TOURISM", "SPORTS",
]

KEYWORDS = ["immigrat", "migrant", "rifugiat", "clandestin", "profug", "sbarc"]

EVENTS = [
    ("2019-09-05", "New government sworn in"),
    ("2019-10-27", "Umbria regional election"),
    ("2019-11-14", "Bologna square protest"),
    ("2019-12-10", "Security decree debate"),
    ("2020-01-26", "Emilia-Romagna regional election"),
]

# (page id, name, in pages file, political side, party for potential audience)
PAGES = [
    ("100001", "Lega - Salvini Premier", True, "anti", "Lega"),
    ("100002", "Matteo Salvini", True, "anti", "Lega"),
    ("100003", "Partito Democratico", True, "pro", "PD"),
    ("100004", "Nicola Zingaretti", True, "pro", "PD"),
    ("100005", "MoVimento 5 Stelle", True, "mixed", "M5S"),
    ("100006", "Luigi Di Maio", True, "mixed", "M5S"),
    ("100007", "Fratelli d'Italia", True, "anti", "FdI"),
    ("100008", "Giorgia Meloni", True, "anti", "FdI"),
    ("100009", "Italia Viva", True, "pro", "IV"),
    ("100010", "Matteo Renzi", True, "pro", "IV"),
    ("100011", "Save the Children Italia", True, "pro", None),
    ("100012", "Medici Senza Frontiere", True, "pro", None),
    ("100013", "CGIL Nazionale", True, "mixed", None),
    ("100014", "Universita di Bologna", True, "none", None),
    ("100015", "Pagella Politica", True, "none", None),
    ("100016", "Comune di Pistoia", True, "none", None),
    ("100017", "Amici del Quartiere", True, "mixed", None),
    ("100018", "Emergency ONG", False, "pro", None),
]

GAZETTEER = [
    ("lega", "party", "Lega"),
    ("matteo salvini", "politician", "Lega"),
    ("partito democratico", "party", "PD"),
    ("nicola zingaretti", "politician", "PD"),
    ("movimento 5 stelle", "party", "M5S"),
    ("luigi di maio", "politician", "M5S"),
    ("fratelli d italia", "party", "FdI"),
    ("giorgia meloni", "politician", "FdI"),
    ("italia viva", "party", "IV"),
    ("matteo renzi", "politician", "IV"),
    ("save the children", "ngo", "none"),
    ("medici senza frontiere", "ngo", "none"),
    ("emergency", "ngo", "none"),
    ("cgil", "trade_union", "none"),
    ("universita di bologna", "university", "none"),
    ("pagella politica", "fact_checker", "none"),
]

# Vocabulary for generated ad texts and the labelled stance corpus.
FILLER = (
    "oggi domani insieme paese italia cittadini famiglie comunità futuro scelta voto "
    "lavoro città territorio persone giorno settimana incontro piazza programma "
    "proposta governo regione comune storia valori progetto impegno partecipa "
    "condividi scopri leggi guarda sostieni firma iscriviti seguici diretta evento"
).split()
ANTI_WORDS = (
    "invasione confini chiusi porti sicurezza espulsioni degrado difendere "
    "rimpatri controlli frontiere illegalità ordine emergenza stop business "
    "accoglienza_falsa pacchia prima_gli_italiani"
).split()
PRO_WORDS = (
    "integrazione diritti solidarietà umanità inclusione cittadinanza dignità "
    "salvare vite corridoi umanitari ponti uguaglianza ospitalità ius_soli "
    "speranza protezione rispetto"
).split()
MIGRATION_NOUNS = ["immigrati", "migranti", "rifugiati", "clandestini", "profughi",
                   "sbarchi", "immigrazione"]
IRRELEVANT_KEYWORD_PHRASES = [
    "corso per migranti digitali", "festival dei rifugiati di montagna",
    "ricette degli immigrati di seconda generazione in cucina", "sbarco sulla luna anniversario",
    "mostra fotografica profughi della storia antica", "uccelli migranti in oasi naturale",
]
OTHER_TOPICS = [
    "tasse più basse per le imprese e le partite iva",
    "ospedali e sanità pubblica più vicina ai cittadini",
    "scuola digitale e nuove aule per i ragazzi",
    "ambiente energia pulita e mobilità sostenibile",
    "lavoro per i giovani e salario minimo",
    "pensioni e quota cento per chi ha lavorato una vita",
    "cultura musei e turismo nelle nostre città",
    "infrastrutture strade e treni per il sud",
    "sport e impianti per tutti i quartieri",
    "sostegno alle famiglie con figli e asili nido",
]


def iso(d):
    return d.isoformat()


def days_between(a, b):
    return (b - a).days


def midpoint(lower, upper):
    return lower if upper is None else (lower + upper) / 2.0


def in_period_estimate(ad):
    """Estimated in-period impressions, mirroring the library's clipping rule."""
    start = dt.date.fromisoformat(ad["ad_delivery_start_time"][:10])
    stop_text = ad.get("ad_delivery_stop_time")
    stop = dt.date.fromisoformat(stop_text[:10]) if stop_text else max(COLLECTION_DATE, start)
    if stop < PERIOD_START or start > PERIOD_END:
        return None
    days = days_between(start, stop) + 1
    clipped = days_between(max(start, PERIOD_START), min(stop, PERIOD_END)) + 1
    imp = ad["impressions"]
    upper = imp.get("upper_bound")
    mid = midpoint(int(imp["lower_bound"]), None if upper is None else int(upper))
    return mid * clipped / days


def normalized(weights):
    total = sum(weights)
    return [w / total for w in weights]


class Generator:
    def __init__(self, seed):
        self.rng = random.Random(seed)

    # ---------------------------------------------------------------- text
    def sentence(self, planted, n_filler=(6, 12)):
        words = self.rng.sample(FILLER, self.rng.randint(*n_filler))
        words += planted
        self.rng.shuffle(words)
        return " ".join(w.replace("_", " ") for w in words)

    def ad_text(self, kind):
        r = self.rng
        if kind == "anti":
            planted = r.sample(ANTI_WORDS, 3) + [r.choice(MIGRATION_NOUNS)]
            return self.sentence(planted).capitalize() + "."
        if kind == "pro":
            planted = r.sample(PRO_WORDS, 3) + [r.choice(MIGRATION_NOUNS)]
            return self.sentence(planted).capitalize() + "."
        if kind == "kw_irrelevant":
            return (r.choice(IRRELEVANT_KEYWORD_PHRASES).capitalize() + ": " +
                    self.sentence([], (5, 9)) + ".")
        return r.choice(OTHER_TOPICS).capitalize() + ". " + self.sentence([], (4, 8)) + "."

    # ---------------------------------------------------------- audiences
    def demographics(self, kind, full_coverage, teen_share, gender_only=None):
        r = self.rng
        male_bias = {"anti": 1.35, "pro": 0.8}.get(kind, 1.0)
        age_profile = {
            "anti": [0, 0.6, 0.9, 1.1, 1.3, 1.4, 1.2],
            "pro": [0, 1.3, 1.4, 1.1, 0.9, 0.8, 0.6],
        }.get(kind, [0, 1.0, 1.1, 1.1, 1.0, 0.9, 0.8])
        present = list(range(1, 7))
        if not full_coverage and gender_only is None:
            # Drop one to three adult buckets.
            dropped = r.sample(present, r.randint(1, 3))
            present = [a for a in present if a not in dropped]
        cells = []
        for g in GENDERS:
            if gender_only and g != gender_only:
                continue
            for a in present:
                w = age_profile[a] * (male_bias if g == "male" else 1.0) * r.uniform(0.7, 1.3)
                cells.append([g, AGES[a], w])
        shares = normalized([c[2] for c in cells])
        scale = 1.0 - teen_share
        out = [{"gender": c[0], "age": c[1], "percentage": round(s * scale, 6)}
               for c, s in zip(cells, shares)]
        if teen_share > 0:
            out.append({"gender": "female", "age": "13-17", "percentage": round(teen_share, 6)})
        if r.random() < 0.3:
            out.append({"gender": "unknown", "age": AGES[r.randint(1, 6)], "percentage": 0.0})
        r.shuffle(out)
        return out

    def regions(self, full_coverage, unknown_region=False):
        r = self.rng
        chosen = REGIONS[:] if full_coverage else r.sample(REGIONS, r.randint(1, 6))
        weights = normalized([r.uniform(0.5, 2.0) for _ in chosen])
        out = [{"region": name, "percentage": round(w, 6)} for name, w in zip(chosen, weights)]
        if unknown_region:
            out.append({"region": "Unknown", "percentage": 0.001})
        r.shuffle(out)
        return out

    # ---------------------------------------------------------- news
    def articles(self, spike_days):
        r = self.rng
        out = []
        day = PERIOD_START - dt.timedelta(days=5)
        counter = 0
        while day <= PERIOD_END + dt.timedelta(days=3):
            n = r.randint(2, 5) + (12 if day in spike_days else 0)
            for _ in range(n):
                counter += 1
                spike = day in spike_days and r.random() < 0.8
                themes = r.sample(OTHER_THEMES, r.randint(2, 6))
                n_mig = r.randint(2, 5) if spike else (1 if r.random() < 0.25 else 0)
                themes += [r.choice(MIGRATION_THEMES) for _ in range(n_mig)]
                r.shuffle(themes)
                stamp = dt.datetime(day.year, day.month, day.day, r.randint(0, 23),
                                    r.randint(0, 59), r.randint(0, 59))
                out.append((f"{stamp:%Y%m%d%H%M%S}-{counter}", stamp,
                            f"https://news.example.it/{day:%Y/%m/%d}/articolo-{counter}", themes))
            day += dt.timedelta(days=1)
        return out


def gkg_line(record_id, stamp, url, themes):
    fields = [""] * 27
    fields[0] = record_id
    fields[1] = f"{stamp:%Y%m%d%H%M%S}"
    fields[2] = "1"
    fields[3] = "news.example.it"
    fields[4] = url
    offset = 0
    parts = []
    for t in themes:
        parts.append(f"{t},{offset}")
        offset += 37
    fields[8] = ";".join(parts)
    return "\t".join(fields)


def make_ads(g, spike_days):
    """Returns (ads as dicts in file order, truth map ad id -> kind)."""
    r = g.rng
    pages_by_side = {}
    for pid, name, _, side, _ in PAGES:
        pages_by_side.setdefault(side, []).append((pid, name))
    spikes = sorted(spike_days)

    plan = ([("anti", i) for i in range(90)] + [("pro", i) for i in range(70)] +
            [("kw_irrelevant", i) for i in range(30)] + [("other", i) for i in range(110)])
    r.shuffle(plan)
    ads = []
    truth = {}
    for n, (kind, _) in enumerate(plan):
        ad_id = f"23842{n + 1:06d}"
        if kind == "anti":
            side = r.choice(["anti"] * 5 + ["mixed"])
        elif kind == "pro":
            side = r.choice(["pro"] * 5 + ["mixed"])
        else:
            side = r.choice(["anti", "pro", "mixed", "none"])
        pid, pname = r.choice(pages_by_side[side])

        # Delivery windows: anti ads follow news spikes by a day.
        if kind == "anti" and r.random() < 0.75:
            start = r.choice(spikes) + dt.timedelta(days=1)
            length = r.randint(1, 3)
        else:
            start = PERIOD_START + dt.timedelta(days=r.randint(-10, 118))
            length = r.randint(1, 21)
        stop = start + dt.timedelta(days=length - 1)
        ads.append({
            "id": ad_id,
            "page_id": pid,
            "page_name": pname,
            "ad_creative_body": g.ad_text(kind),
            "ad_creation_time": f"{start - dt.timedelta(days=1)}T09:00:00+0000",
            "ad_delivery_start_time": f"{start}T10:00:00+0000",
            "ad_delivery_stop_time": f"{stop}T23:00:00+0000",
            "ad_snapshot_url": f"https://www.facebook.com/ads/archive/render_ad/?id={ad_id}",
            "snapshot_time": "2020-03-30T12:00:00+0000",
        })
        truth[ad_id] = kind
        if r.random() < 0.2:
            ads[-1]["ad_creative_link_title"] = r.choice(
                ["Scopri di più", "Firma ora", "Partecipa", "Leggi il programma"])
    return ads, truth


def assign_audiences(g, ads, truth):
    """Sets impressions, spend and breakdowns so that targeted ads produce
    exactly TARGETED_SHARE of in-period impressions."""
    r = g.rng
    untargeted_ids = []
    for n, ad in enumerate(ads):
        kind = truth[ad["id"]]
        est_kind = "anti" if kind == "anti" else "pro" if kind == "pro" else "other"
        roll = r.random()
        if roll < 0.35:
            # No demographic targeting: every region, every adult bucket, both genders.
            ad["demographic_distribution"] = g.demographics(
                est_kind, True, 0.0 if r.random() < 0.6 else 0.004)
            ad["region_distribution"] = g.regions(True)
            untargeted_ids.append(ad["id"])
        elif roll < 0.37:
            ad["demographic_distribution"] = g.demographics(
                est_kind, True, 0.0, gender_only=r.choice(GENDERS))
            ad["region_distribution"] = g.regions(True)
        elif roll < 0.62:
            ad["demographic_distribution"] = g.demographics(est_kind, True, 0.0)
            ad["region_distribution"] = g.regions(False, unknown_region=(n % 50 == 7))
        else:
            # Restricted on ages, regions or both, never on neither.
            full_ages = r.random() < 0.5
            full_regions = not full_ages and r.random() < 0.6
            ad["demographic_distribution"] = g.demographics(est_kind, full_ages, 0.0)
            ad["region_distribution"] = g.regions(full_regions)
        scale = {"anti": 3.0, "pro": 1.4}.get(kind, 1.0)
        lower = int(round(r.uniform(2000, 60000) * scale, -3))
        if n % 97 == 13:
            ad["impressions"] = {"lower_bound": str(lower * 10)}  # open-ended range
        else:
            ad["impressions"] = {"lower_bound": str(lower), "upper_bound": str(lower * 2 - 1)}
        spend = int(lower / 200) + 100
        ad["spend"] = {"lower_bound": str(spend), "upper_bound": str(spend * 2 - 1)}

    # Untargeted ads must lie inside the period so their mass is exact.
    for ad in ads:
        if ad["id"] in untargeted_ids:
            start = dt.date.fromisoformat(ad["ad_delivery_start_time"][:10])
            stop = dt.date.fromisoformat(ad["ad_delivery_stop_time"][:10])
            if start < PERIOD_START or stop > PERIOD_END:
                shift = (PERIOD_START - start).days if start < PERIOD_START else \
                    (PERIOD_END - stop).days
                start += dt.timedelta(days=shift)
                stop += dt.timedelta(days=shift)
                ad["ad_delivery_start_time"] = f"{start}T10:00:00+0000"
                ad["ad_delivery_stop_time"] = f"{stop}T23:00:00+0000"

    targeted = 0.0
    for ad in ads:
        if ad["id"] in untargeted_ids:
            continue
        est = in_period_estimate(ad)
        if est is not None:
            targeted += est
    untargeted_total = targeted * (1 - TARGETED_SHARE) / TARGETED_SHARE
    in_period_untargeted = [ad for ad in ads if ad["id"] in untargeted_ids
                            and in_period_estimate(ad) is not None]
    weights = normalized([r.uniform(0.5, 1.5) for _ in in_period_untargeted])
    for ad, w in zip(in_period_untargeted, weights):
        mid = int(round(untargeted_total * w))
        half = max(1, mid // 3)
        ad["impressions"] = {"lower_bound": str(mid - half), "upper_bound": str(mid + half)}
    return untargeted_ids


def annotations(g, ads, truth):
    r = g.rng
    candidates = [ad["id"] for ad in ads if truth[ad["id"]] in ("anti", "pro", "kw_irrelevant")]
    chosen = sorted(r.sample(candidates, 130))
    rows = []
    for ad_id in chosen:
        kind = truth[ad_id]
        for annotator in ("ann1", "ann2", "ann3"):
            if kind == "anti":
                label = r.choice(["5", "5", "4", "4", "4", "3"]) if r.random() > 0.04 else "2"
            elif kind == "pro":
                label = r.choice(["1", "1", "2", "2", "2", "3"]) if r.random() > 0.04 else "4"
            else:
                label = "irrelevant" if r.random() > 0.08 else "3"
            rows.append(f"{ad_id}|{annotator}|{label}")
    return rows


def stance_corpus(seed):
    """500 labelled documents with planted class stems; irrelevant is the
    majority class."""
    r = random.Random(seed)
    labels = ["irrelevant"] * 260 + ["anti"] * 130 + ["pro"] * 110
    r.shuffle(labels)
    out = []
    for i, label in enumerate(labels):
        words = r.sample(FILLER, r.randint(8, 16))
        if label == "irrelevant":
            topic = r.choice(OTHER_TOPICS).split()
            words += topic
            if r.random() < 0.15:
                words.append(r.choice(MIGRATION_NOUNS))  # keyword noise
        else:
            pool, other = (ANTI_WORDS, PRO_WORDS) if label == "anti" else (PRO_WORDS, ANTI_WORDS)
            words += r.sample(pool, r.randint(2, 4))
            words.append(r.choice(MIGRATION_NOUNS))
            if r.random() < 0.15:
                words.append(r.choice(other))  # cross-class noise
        r.shuffle(words)
        text = " ".join(w.replace("_", " ") for w in words)
        out.append({"id": f"doc{i + 1:03d}", "text": text.capitalize() + ".", "label": label})
    return out


def write_lines(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def jsonl(obj):
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--root", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    root = Path(args.root)
    fixtures = root / "fixtures"
    config = root / "config"

    g = Generator(SEED)
    all_days = [PERIOD_START + dt.timedelta(days=i)
                for i in range((PERIOD_END - PERIOD_START).days + 1)]
    spike_days = set(g.rng.sample(all_days[:-2], 14))

    ads, truth = make_ads(g, spike_days)
    untargeted = assign_audiences(g, ads, truth)

    # Older snapshots of a few ads; the newer record must win deduplication.
    stale = []
    for ad in g.rng.sample(ads, 6):
        old = json.loads(json.dumps(ad))
        old["snapshot_time"] = "2020-01-15T08:00:00+0000"
        old["impressions"] = {"lower_bound": "1000", "upper_bound": "1999"}
        stale.append(old)
    records = stale[:3] + ads + stale[3:]
    write_lines(fixtures / "ads.jsonl", [jsonl(a) for a in records])

    write_lines(fixtures / "pages.jsonl",
                [jsonl({"page_id": pid, "name": name})
                 for pid, name, listed, _, _ in PAGES if listed])
    write_lines(fixtures / "gazetteer.psv",
                ["surface_form|actor_type|party_affiliation"] +
                [f"{s}|{t}|{p}" for s, t, p in GAZETTEER])
    write_lines(fixtures / "annotations.psv",
                ["ad_id|annotator_id|label"] + annotations(g, ads, truth))

    articles = g.articles(spike_days)
    write_lines(fixtures / "articles.gkg.tsv", [gkg_line(*a) for a in articles])

    manifest = {
        "ads": ["ads.jsonl"],
        "articles": ["articles.gkg.tsv"],
        "pages": ["pages.jsonl"],
        "annotations": ["annotations.psv"],
        "period": {"start": iso(PERIOD_START), "end": iso(PERIOD_END)},
    }
    (fixtures / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    write_lines(fixtures / "events.csv", ["date,label"] + [f"{d},{l}" for d, l in EVENTS])
    write_lines(fixtures / "truth.csv",
                ["ad_id,kind,untargeted"] +
                [f"{ad['id']},{truth[ad['id']]},{int(ad['id'] in untargeted)}" for ad in ads])

    # Audience reference data.
    pop_age = [0.05, 0.11, 0.15, 0.17, 0.19, 0.16, 0.17]
    population = []
    for gender, gw in (("male", 0.49), ("female", 0.51)):
        for a, w in zip(AGES, pop_age):
            population.append([gender, a, gw * w])
    shares = [round(p[2], 6) for p in population]
    shares[-1] = round(1.0 - sum(shares[:-1]), 6)
    write_lines(fixtures / "population.csv",
                ["gender,age,share"] +
                [f"{p[0]},{p[1]},{s:.6f}" for p, s in zip(population, shares)])

    party_skew = {
        "PD": (0.95, [0.6, 0.8, 0.9, 1.0, 1.1, 1.3, 1.4]),
        "Lega": (1.25, [0.5, 0.9, 1.1, 1.2, 1.2, 1.1, 0.9]),
        "M5S": (1.05, [0.9, 1.3, 1.3, 1.1, 0.9, 0.8, 0.6]),
        "FdI": (1.2, [0.6, 1.0, 1.1, 1.2, 1.2, 1.0, 0.8]),
        "IV": (1.0, [0.5, 0.8, 1.0, 1.1, 1.1, 1.1, 1.0]),
    }
    rows = ["party,gender,age,users"]
    for party, (male, ages) in party_skew.items():
        for gender in GENDERS:
            for a, w in zip(AGES, ages):
                users = 200000 * w * (male if gender == "male" else 1.0) * g.rng.uniform(0.9, 1.1)
                rows.append(f"{party},{gender},{a},{int(users)}")
    write_lines(fixtures / "potential_audience.csv", rows)

    survey = {
        "PD": (0.14, 0.49, 0.37),
        "Lega": (0.21, 0.57, 0.22),
        "M5S": (0.31, 0.54, 0.15),
        "FdI": (0.20, 0.58, 0.22),
        "IV": (0.17, 0.53, 0.30),
    }
    rows = ["party,bucket,share"]
    for party, parts in survey.items():
        for bucket, share in zip(["18-34", "35-64", "65+"], parts):
            rows.append(f"{party},{bucket},{share:.2f}")
    write_lines(fixtures / "survey.csv", rows)

    write_lines(fixtures / "stance_corpus.jsonl", [jsonl(d) for d in stance_corpus(SEED + 1)])

    # Malformed inputs for parser tests.
    good = jsonl(ads[0])
    write_lines(fixtures / "malformed" / "truncated_ads.jsonl",
                [jsonl(ads[1]), good[: len(good) // 2]])
    bad = json.loads(good)
    bad["demographic_distribution"][0]["percentage"] = 1.4
    write_lines(fixtures / "malformed" / "bad_share_ads.jsonl", [jsonl(ads[2]), jsonl(bad)])
    open_ended = json.loads(good)
    open_ended["impressions"] = {"lower_bound": "1000000"}
    write_lines(fixtures / "malformed" / "open_range_ads.jsonl", [jsonl(open_ended)])

    # Catalogs and run configuration.
    write_lines(config / "keywords.txt",
                ["# Italian stems for migration-related ads; a token matches by prefix."] + KEYWORDS)
    write_lines(config / "migration_themes.txt",
                ["# GKG themes counted as migration coverage."] + MIGRATION_THEMES)
    write_lines(config / "italian_regions.txt",
                ["# Region names as they appear in ad region breakdowns."] + REGIONS)
    run = {
        "manifest": "../fixtures/manifest.json",
        "keywords": "keywords.txt",
        "themes": "migration_themes.txt",
        "gazetteer": "../fixtures/gazetteer.psv",
        "regions": "italian_regions.txt",
        "population": "../fixtures/population.csv",
        "potential_audience": "../fixtures/potential_audience.csv",
        "survey": "../fixtures/survey.csv",
        "events": "../fixtures/events.csv",
        "period": {"start": iso(PERIOD_START), "end": iso(PERIOD_END)},
        "collection_date": iso(COLLECTION_DATE),
        "seed": 20200330,
        "output_dir": "../../out",
        "models": {
            "relevance": {"family": "random_forest",
                          "hyperparameters": {"n_trees": 100, "min_samples_split": 3}},
            "leaning": {"family": "multinomial_naive_bayes",
                        "hyperparameters": {"alpha": 0.4}},
        },
        "extra_irrelevant": 40,
        "granger": {"max_lag": 10, "significance": 0.01, "first_difference": False},
        "threads": 1,
        "top_features": 15,
        "report": {"audience": True, "targeting": True, "agenda": True, "features": True},
    }
    (config / "run.json").write_text(json.dumps(run, indent=2) + "\n")


if __name__ == "__main__":
    main()
