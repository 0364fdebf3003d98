//! Fixtures shared by the benchmarks in `benches/`.

use cartier_kit::{make_field, CurveInstance, RamificationType};

/// `y^n = f` over `F_{p^k}` with branch points the first `mults.len()` field elements.
pub fn fixture(p: u32, k: usize, n: u32, mults: &[u32]) -> CurveInstance {
    let field = make_field(p, k, 0).expect("valid field");
    let points = (0..mults.len() as u64).map(|i| field.element(i)).collect();
    let rtype = RamificationType::new(n, mults.to_vec()).expect("valid type");
    CurveInstance::new(&field, rtype, points).expect("valid instance")
}
