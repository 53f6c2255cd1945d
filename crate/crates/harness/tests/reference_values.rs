//! Published reference values that are cheap enough to reproduce in a test.

use adifdtd_harness::{converge_space, energy_audit, Experiment, RunConfig};

fn close(got: f64, want: f64, digits_tol: f64) -> bool {
    (got - want).abs() <= digits_tol
}

/// Energy-norm ratios against the exact solution on the full-size grid.
/// They are flat along the trajectory, so two steps suffice.
#[test]
fn energy_ratios_on_full_grid() {
    let mut c = RunConfig::full_scale(Experiment::EnergyAudit);
    c.t_final = 0.02;
    c.levels = vec![1, 2];
    let r = energy_audit(&c, None).unwrap();
    let last = |name: &str| r.table.values(name).last().copied().flatten().unwrap();
    for (name, want, tol) in [
        ("EH1_n", 1.00008, 5e-6),
        ("EHt1_n", 0.99979, 5e-6),
        ("EH2_n", 1.0001, 5e-5),
        ("EHt2_n", 0.99984, 5e-6),
        ("EH1s_n", 0.99996, 5e-6),
        ("EHt1s_n", 0.99967, 5e-6),
        ("EH2s_n", 1.0000, 5e-5),
        ("EHt2s_n", 0.99971, 5e-6),
    ] {
        let got = last(name);
        assert!(close(got, want, tol), "{name}: {got} vs {want}");
    }
}

/// Spatial error at h = 0.025, Δt = 0.001, T = 1.
#[test]
fn spatial_error_at_forty_cells() {
    let mut c = RunConfig::full_scale(Experiment::ConvergeSpace);
    c.grid_list = vec![40];
    let r = converge_space(&c, None).unwrap();
    let m = r.rows[0].metrics;
    assert!(close(m.eh1, 1.405e-3, 5e-7), "EH1 {}", m.eh1);
    assert!(close(m.eht1.unwrap(), 1.430e-3, 5e-6), "EHt1 {:?}", m.eht1);
}
