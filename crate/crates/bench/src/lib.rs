//! Benchmark fixtures.

use staticgeo_core::catalog::{self, CatalogEntry, CatalogParams};

/// Catalog entries at a fixed grid size.
pub fn entries(grid: usize) -> Vec<CatalogEntry> {
    catalog::names()
        .iter()
        .map(|name| {
            catalog::build(name, &CatalogParams::default())
                .expect("default catalog parameters are valid")
                .with_grid_points(grid)
        })
        .collect()
}

pub fn entry(name: &str) -> CatalogEntry {
    catalog::build(name, &CatalogParams::default()).expect("known catalog name")
}
