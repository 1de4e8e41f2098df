pub mod cli;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod rep;
pub mod scan;

pub use error::{Error, Result};
pub use lie::LieGroupCatalogEntry;
pub use metric::MetricSpec;

/// Consistency checks of the built-in tables, run at CLI startup.
pub fn self_test() -> Result<()> {
    let fail = |what: String| Err(Error::InvalidStructureConstants(format!("self-test: {what}")));
    let table = [
        (LieGroupCatalogEntry::su2(), 2),
        (LieGroupCatalogEntry::so3(), 2),
        (LieGroupCatalogEntry::torus(1)?, 1),
        (LieGroupCatalogEntry::torus(2)?, 2),
        (LieGroupCatalogEntry::torus(3)?, 3),
        (LieGroupCatalogEntry::su2_x_su2(), 5),
    ];
    for (entry, k) in &table {
        entry.validate()?;
        if entry.k_max() != *k {
            return fail(format!("k_max({}) = {}, expected {k}", entry.key(), entry.k_max()));
        }
    }
    if lie::sun_k_max(2) != 2 {
        return fail(format!("n²−2n+2 at n=2 gives {}", lie::sun_k_max(2)));
    }
    let su2 = &table[0].0;
    let lam = rep::lambda1_certified(su2, &MetricSpec::identity(3))?.lambda1;
    if (lam - 3.0).abs() > 1e-9 {
        return fail(format!("λ₁(su2, I) = {lam}, expected 3"));
    }
    Ok(())
}
