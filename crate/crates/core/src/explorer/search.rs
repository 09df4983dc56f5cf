//! Exhaustive search over small shoes for hyperbit advantages.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blackjack::{build_game, shoe_key, CardType, RoundConfig};
use crate::error::{Error, Result};
use crate::hyperbit::HyperbitOptions;
use crate::solve::screen_advantage;

/// Default advantage threshold for catalogs.
pub const DEFAULT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageRecord {
    pub config: RoundConfig,
    #[serde(rename = "I_U")]
    pub i_u: f64,
    #[serde(rename = "I_C")]
    pub i_c: f64,
    #[serde(rename = "I_H")]
    pub i_h: f64,
    pub advantage: f64,
    pub rows: usize,
    pub cols: usize,
    pub shoe_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub shoe_size: usize,
    pub bob_upcards: Vec<CardType>,
    pub dealer_upcards: Vec<CardType>,
    pub threshold: f64,
    pub hyperbit: HyperbitOptions,
}

impl SearchParams {
    /// All 10 x 10 upcard pairs at the default threshold.
    pub fn new(shoe_size: usize) -> Self {
        SearchParams {
            shoe_size,
            bob_upcards: CardType::ALL.to_vec(),
            dealer_upcards: CardType::ALL.to_vec(),
            threshold: DEFAULT_THRESHOLD,
            hyperbit: HyperbitOptions::default(),
        }
    }

    fn header(&self) -> CheckpointHeader {
        CheckpointHeader {
            shoe_size: self.shoe_size,
            bob_upcards: self.bob_upcards.clone(),
            dealer_upcards: self.dealer_upcards.clone(),
            threshold: self.threshold,
            seed: self.hyperbit.seed,
            restarts: self.hyperbit.restarts,
        }
    }
}

/// Search output plus the strata it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub shoe_size: usize,
    pub bob_upcards: Vec<CardType>,
    pub dealer_upcards: Vec<CardType>,
    pub threshold: f64,
    pub records: Vec<AdvantageRecord>,
}

/// Every multiset of `k` cards as per-type counts, in lexicographic order of
/// the sorted rank string.
pub fn multisets(k: usize) -> Vec<[u32; 10]> {
    fn rec(k: usize, from: usize, cur: &mut [u32; 10], out: &mut Vec<[u32; 10]>) {
        if k == 0 {
            out.push(*cur);
            return;
        }
        for i in from..10 {
            cur[i] += 1;
            rec(k - 1, i, cur, out);
            cur[i] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(k, 0, &mut [0; 10], &mut out);
    out
}

fn cards_of(counts: &[u32; 10]) -> Vec<CardType> {
    CardType::ALL
        .iter()
        .flat_map(|&c| std::iter::repeat_n(c, counts[c.index()] as usize))
        .collect()
}

/// Multinomial probability of drawing exactly this multiset from an
/// infinite supply of full decks.
pub fn shoe_weight(counts: &[u32; 10]) -> f64 {
    let mut log = 0.0;
    let mut n = 0u32;
    for c in CardType::ALL {
        let k = counts[c.index()];
        for i in 1..=k {
            n += 1;
            log += f64::from(n).ln() - f64::from(i).ln();
        }
        log += f64::from(k) * c.infinite_deck_probability().ln();
    }
    log.exp()
}

fn search_multiset(counts: &[u32; 10], params: &SearchParams) -> Result<Vec<AdvantageRecord>> {
    let shoe = cards_of(counts);
    let weight = shoe_weight(counts);
    let mut out = Vec::new();
    for &bob in &params.bob_upcards {
        for &dealer in &params.dealer_upcards {
            let cfg = RoundConfig::new(bob, dealer, shoe.clone())?;
            let (c, _) = build_game(&cfg)?;
            let (i_u, i_c, hyper) = screen_advantage(&c, &params.hyperbit, params.threshold)?;
            if let Some(h) = hyper {
                let advantage = h.value - i_c;
                if advantage > params.threshold {
                    out.push(AdvantageRecord {
                        config: cfg,
                        i_u,
                        i_c,
                        i_h: h.value,
                        advantage,
                        rows: c.rows(),
                        cols: c.cols(),
                        shoe_weight: weight,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CheckpointHeader {
    shoe_size: usize,
    bob_upcards: Vec<CardType>,
    dealer_upcards: Vec<CardType>,
    threshold: f64,
    seed: u64,
    restarts: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum CheckpointLine {
    Header { header: CheckpointHeader },
    Done { key: String, records: Vec<AdvantageRecord> },
}

/// Replays a checkpoint; a torn final line (interrupted write) is ignored.
fn read_checkpoint(path: &Path, header: &CheckpointHeader) -> Result<BTreeMap<String, Vec<AdvantageRecord>>> {
    let mut done = BTreeMap::new();
    let Ok(file) = File::open(path) else {
        return Ok(done);
    };
    let lines: Vec<String> = BufReader::new(file).lines().collect::<std::io::Result<_>>()?;
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CheckpointLine>(line) {
            Ok(CheckpointLine::Header { header: h }) => {
                if &h != header {
                    return Err(Error::InvalidArgument(format!(
                        "checkpoint {} was written for different search parameters",
                        path.display()
                    )));
                }
            }
            Ok(CheckpointLine::Done { key, records }) => {
                done.insert(key, records);
            }
            Err(_) if i + 1 == lines.len() => log::warn!("dropping torn checkpoint line {}", i + 1),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(done)
}

/// Number of multisets solved between checkpoint flushes.
const BATCH: usize = 64;

/// Searches every shoe of `params.shoe_size` cards against every upcard pair.
/// With a checkpoint path, finished multisets are appended as JSON lines and
/// skipped when the search is rerun.
pub fn search_shoes(params: &SearchParams, checkpoint: Option<&Path>) -> Result<Catalog> {
    if params.shoe_size < 3 {
        return Err(Error::InvalidArgument(format!(
            "shoe size {} is below 3; hits need a card after the deal",
            params.shoe_size
        )));
    }
    if params.shoe_size > 8 {
        log::warn!("shoe size {} is beyond the usual 3..=8 range", params.shoe_size);
    }
    let header = params.header();
    let mut done = match checkpoint {
        Some(p) => read_checkpoint(p, &header)?,
        None => BTreeMap::new(),
    };
    let mut writer = match checkpoint {
        Some(p) => {
            let fresh = !p.exists() || std::fs::metadata(p)?.len() == 0;
            let mut f = OpenOptions::new().create(true).append(true).open(p)?;
            if fresh {
                writeln!(f, "{}", serde_json::to_string(&CheckpointLine::Header { header: header.clone() })?)?;
            }
            Some(f)
        }
        None => None,
    };
    let todo: Vec<[u32; 10]> = multisets(params.shoe_size)
        .into_iter()
        .filter(|m| !done.contains_key(&shoe_key(&cards_of(m))))
        .collect();
    log::info!("shoe size {}: {} multisets to search", params.shoe_size, todo.len());
    for batch in todo.chunks(BATCH) {
        let results = batch
            .par_iter()
            .map(|m| Ok((shoe_key(&cards_of(m)), search_multiset(m, params)?)))
            .collect::<Result<Vec<_>>>()?;
        for (key, records) in results {
            if let Some(f) = writer.as_mut() {
                let line = CheckpointLine::Done { key: key.clone(), records: records.clone() };
                writeln!(f, "{}", serde_json::to_string(&line)?)?;
            }
            done.insert(key, records);
        }
        if let Some(f) = writer.as_mut() {
            f.flush()?;
        }
    }
    let mut records: Vec<AdvantageRecord> = done.into_values().flatten().collect();
    sort_records(&mut records);
    Ok(Catalog {
        shoe_size: params.shoe_size,
        bob_upcards: params.bob_upcards.clone(),
        dealer_upcards: params.dealer_upcards.clone(),
        threshold: params.threshold,
        records,
    })
}

/// Descending advantage, then `bob/dealer/shoe` key.
pub fn sort_records(records: &mut [AdvantageRecord]) {
    records.sort_by(|a, b| {
        b.advantage
            .total_cmp(&a.advantage)
            .then_with(|| a.config.key().cmp(&b.config.key()))
    });
}

/// `sum shoe_weight * P(bob upcard) * P(dealer upcard) * advantage` over a
/// catalog that covers every upcard pair.
pub fn expected_advantage(k: usize, catalog: &Catalog) -> Result<f64> {
    if catalog.shoe_size != k {
        return Err(Error::IncompleteCatalog(format!(
            "catalog is for shoe size {}, not {k}",
            catalog.shoe_size
        )));
    }
    let missing = |have: &[CardType]| -> Vec<String> {
        let have: BTreeSet<_> = have.iter().collect();
        CardType::ALL.iter().filter(|c| !have.contains(c)).map(ToString::to_string).collect()
    };
    let (mb, md) = (missing(&catalog.bob_upcards), missing(&catalog.dealer_upcards));
    if !mb.is_empty() || !md.is_empty() {
        return Err(Error::IncompleteCatalog(format!(
            "missing bob upcards [{}] and dealer upcards [{}]",
            mb.join(","),
            md.join(",")
        )));
    }
    if let Some(r) = catalog.records.iter().find(|r| r.config.shoe.len() != k) {
        return Err(Error::IncompleteCatalog(format!("record {} has the wrong shoe size", r.config.key())));
    }
    Ok(catalog
        .records
        .iter()
        .map(|r| {
            r.shoe_weight
                * r.config.bob_upcard.infinite_deck_probability()
                * r.config.dealer_upcard.infinite_deck_probability()
                * r.advantage
        })
        .fold(0.0, |a, b| a + b))
}

/// CSV row of a catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub shoe_size: usize,
    pub bob_upcard: CardType,
    pub dealer_upcard: CardType,
    pub shoe: String,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "I_U")]
    pub i_u: f64,
    #[serde(rename = "I_C")]
    pub i_c: f64,
    #[serde(rename = "I_H")]
    pub i_h: f64,
    pub advantage: f64,
    pub shoe_weight: f64,
}

pub const CATALOG_COLUMNS: [&str; 11] = [
    "shoe_size",
    "bob_upcard",
    "dealer_upcard",
    "shoe",
    "M",
    "N",
    "I_U",
    "I_C",
    "I_H",
    "advantage",
    "shoe_weight",
];

impl Catalog {
    pub fn rows(&self) -> Vec<CatalogRow> {
        self.records
            .iter()
            .map(|r| CatalogRow {
                shoe_size: r.config.shoe.len(),
                bob_upcard: r.config.bob_upcard,
                dealer_upcard: r.config.dealer_upcard,
                shoe: shoe_key(&r.config.shoe),
                m: r.rows,
                n: r.cols,
                i_u: r.i_u,
                i_c: r.i_c,
                i_h: r.i_h,
                advantage: r.advantage,
                shoe_weight: r.shoe_weight,
            })
            .collect()
    }

    /// Writes the CSV; the header is present even for an empty catalog.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(CATALOG_COLUMNS)?;
        for row in self.rows() {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads records back from CSV; the covered strata must be supplied
    /// because the CSV does not carry them.
    pub fn read_csv<R: std::io::Read>(
        r: R,
        shoe_size: usize,
        bob_upcards: Vec<CardType>,
        dealer_upcards: Vec<CardType>,
        threshold: f64,
    ) -> Result<Catalog> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers()?.clone();
        if headers.iter().ne(CATALOG_COLUMNS) {
            return Err(Error::Schema(format!("unexpected catalog columns {:?}", headers)));
        }
        let mut records = Vec::new();
        for row in rd.deserialize::<CatalogRow>() {
            let row = row?;
            let shoe = crate::blackjack::parse_cards(&row.shoe)?;
            records.push(AdvantageRecord {
                config: RoundConfig::new(row.bob_upcard, row.dealer_upcard, shoe)?,
                i_u: row.i_u,
                i_c: row.i_c,
                i_h: row.i_h,
                advantage: row.advantage,
                rows: row.m,
                cols: row.n,
                shoe_weight: row.shoe_weight,
            });
        }
        Ok(Catalog { shoe_size, bob_upcards, dealer_upcards, threshold, records })
    }
}
