//! Closed-form scan over the Weyl chamber: gadget parameters, spectra, the
//! iSWAP-dominance region, and the trace functional minimized by iSWAP.

use designgap::gadget::{gadget_abc, gadget_t2_spectrum, iswap_dominance_region, trace_functional};
use designgap::kak::weyl_grid;

fn main() {
    let grid = weyl_grid(8);
    let mut in_region = 0usize;
    let mut best = (f64::INFINITY, grid[0]);
    for k in &grid {
        if iswap_dominance_region(k) {
            in_region += 1;
        }
        let tf = trace_functional(k);
        if tf < best.0 {
            best = (tf, *k);
        }
    }
    println!("{} grid points, {} inside the iSWAP-comparable region", grid.len(), in_region);
    println!(
        "trace functional minimum {:.6} at ({:.4}, {:.4}, {:.4})",
        best.0, best.1.kx, best.1.ky, best.1.kz
    );
    let sample = &grid[grid.len() / 2];
    let abc = gadget_abc(sample);
    let (l2, l3) = gadget_t2_spectrum(sample);
    println!(
        "sample point ({:.4}, {:.4}, {:.4}): a={:.4} b={:.4} c={:.4}, spectrum (1, 1, {:.4}, {:.4})",
        sample.kx, sample.ky, sample.kz, abc.a, abc.b, abc.c, l2, l3
    );
}
