//! Fixtures shared by the benchmarks in `benches/`.

use tq_core::derived::{Window, WindowOptions};
use tq_core::threadquiver::Quiver;

/// `v0 → v1 → … → v{n-1}`.
pub fn linear(n: usize) -> Quiver {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arrows = (1..n).map(|i| (format!("e{i}"), names[i - 1].clone(), names[i].clone(), false)).collect();
    Quiver::from_named(names, arrows).expect("linear quiver")
}

/// `D_4` with all arms pointing into the centre.
pub fn d4() -> Quiver {
    Quiver::from_edges(&["a", "b", "c", "d"], &[("a", "d"), ("b", "d"), ("c", "d")]).expect("D4 quiver")
}

pub fn window(q: &Quiver, radius: usize) -> Window {
    Window::build(q, WindowOptions::radius(radius)).expect("window builds")
}
