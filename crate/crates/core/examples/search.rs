//! Shoe search on a few upcards, then expected advantage per shoe size
//! from the bundled full catalogs.

use std::fs::File;

use hbg::blackjack::CardType;
use hbg::explorer::search::{expected_advantage, search_shoes, Catalog, SearchParams, DEFAULT_THRESHOLD};

fn main() -> hbg::error::Result<()> {
    let mut params = SearchParams::new(4);
    params.bob_upcards = vec![CardType::Nine, CardType::Ten];
    params.dealer_upcards = vec![CardType::Ten];
    let cat = search_shoes(&params, None)?;
    println!("size 4, bob 9/T vs dealer T: {} configurations", cat.records.len());
    for r in cat.records.iter().take(5) {
        println!("  {:<14} {}x{}  advantage {:.6}", r.config.key(), r.rows, r.cols, r.advantage);
    }

    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for k in 3..=8 {
        let path = format!("{data}/catalog_size{k}.csv");
        let Ok(f) = File::open(&path) else {
            println!("size {k}: no catalog at {path}");
            continue;
        };
        let cat = Catalog::read_csv(f, k, CardType::ALL.to_vec(), CardType::ALL.to_vec(), DEFAULT_THRESHOLD)?;
        println!("size {k}: {:>6} configurations, expected advantage {:.4e}", cat.records.len(), expected_advantage(k, &cat)?);
    }
    Ok(())
}
