//! Dev tool: grid-search lattice parameters that verify cleanly at small r.

use num_rational::Ratio;
use preservers::lowerbound::lattice::LatticeParams;
use preservers::lowerbound::{build_sv_lowerbound, verify_lowerbound};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let r_target: i64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(4);

    let min_n: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(200);
    let min_density: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(1.2);

    let mut found = 0;
    let mut heights: Vec<i64> = (10..=60).step_by(2).collect();
    heights.reverse();
    let mut widths: Vec<i64> = (6..=15).collect();
    widths.reverse();
    let mut zone_heights = vec![2i64, 3];
    if let (Some(h), Some(w), Some(hz)) = (args.get(4), args.get(5), args.get(6)) {
        heights = vec![h.parse().unwrap()];
        widths = vec![w.parse().unwrap()];
        zone_heights = vec![hz.parse().unwrap()];
    }
    for &h in &heights {
        for &w in &widths {
            for &hz in &zone_heights {
                for (c1n, c1d) in [(1i64, 2i64), (5, 9), (2, 3), (3, 4), (1, 1), (5, 4), (3, 2), (2, 1)] {
                    for b in 1..=9i64 {
                        for a in 1..=b {
                            if num_integer::gcd(a, b) != 1 {
                                continue;
                            }
                            let params = LatticeParams::new(
                                h,
                                w,
                                hz,
                                r_target,
                                Ratio::new(a, b),
                                Ratio::new(c1n, c1d),
                            );
                            if params.validate().is_err() {
                                continue;
                            }
                            let inst = match build_sv_lowerbound(&params) {
                                Ok(i) => i,
                                Err(_) => continue,
                            };
                            if inst.demands.len() < 8 {
                                continue;
                            }
                            // Need a non-degenerate direction menu: at least
                            // 2 distinct canonical directions.
                            let report = match verify_lowerbound(&inst, 20_000, 4) {
                                Ok(r) => r,
                                Err(_) => continue,
                            };
                            if report.pairs_skipped > 0
                                || !report.unique_violations.is_empty()
                                || report.canonical_fraction < 0.2
                                || report.canonical_probe_failures > 0
                                || report.noncanonical_required > 0
                            {
                                continue;
                            }
                            // Negative control: widening phi by 10 must break
                            // uniqueness.
                            let mut bad = params.clone();
                            bad.phi_tan = bad.phi_tan * 10;
                            let control_violations = build_sv_lowerbound(&bad)
                                .ok()
                                .and_then(|ci| verify_lowerbound(&ci, 20_000, 4).ok())
                                .map(|cr| cr.unique_violations.len())
                                .unwrap_or(0);
                            let n = inst.graph.node_count();
                            let m = inst.graph.edge_count();
                            let s = inst.demands.declared_sources().map(|s| s.len()).unwrap_or(0);
                            let p = inst.demands.len();
                            if control_violations == 0
                                || n < min_n
                                || (m as f64) < min_density * n as f64
                            {
                                continue;
                            }
                            println!(
                                "r={r_target} h={h} w={w} hz={hz} c1={c1n}/{c1d} skew={a}/{b} | n={n} m={m} p={p} S={s} frac={:.3} m/n={:.2} ctrl_viol={control_violations}",
                                report.canonical_fraction,
                                m as f64 / n as f64,
                            );
                            found += 1;
                            if found > 400 {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}
