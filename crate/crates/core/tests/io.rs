mod common;

use std::f64::consts::TAU;
use std::sync::Arc;

use multiflow_core::io::manufactured::{case_registry, sample_case, ManufacturedCase};
use multiflow_core::io::output::{parse_table, render_snapshot, render_timeseries};
use multiflow_core::io::{
    manufactured_case, manufactured_forcing, manufactured_residual, parse_config, read_table,
    write_snapshot, write_timeseries,
};
use multiflow_core::model::BodyForce;
use multiflow_core::solver::Diagnostics;
use multiflow_core::{MixtureParams, MixtureState, ModelVariant, ViscosityMatrices};
use proptest::prelude::*;

fn diag(t: f64, masses: Vec<f64>, k: f64, p: f64, d: f64, floors: usize) -> Diagnostics {
    Diagnostics {
        t,
        masses,
        kinetic: k,
        potential: p,
        dissipation: d,
        momentum: 0.0,
        floor_events: floors,
    }
}

#[test]
fn empty_and_single_row_timeseries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/ts.csv");
    write_timeseries(&[], 2, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "t,mass_1,mass_2,kinetic,potential,dissipation,floor_events\n");

    write_timeseries(&[diag(0.5, vec![1.0, 2.0], 0.1, 0.2, 0.3, 0)], 2, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.ends_with('\n'));
}

#[test]
fn snapshot_columns() {
    let grid = common::periodic(1.0, 8);
    let uniform = MixtureState::uniform(ModelVariant::Original, &grid, &[1.5], &[-0.25]).unwrap();
    let table = parse_table(&render_snapshot(&uniform, &grid)).unwrap();
    assert_eq!(table.header, ["x", "rho_1", "u_1"]);
    assert!(table.column("rho_1").unwrap().iter().all(|&v| v == 1.5));
    assert!(table.column("u_1").unwrap().iter().all(|&v| v == -0.25));
}

#[test]
fn unwritable_path_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("ts.csv");
    let err = write_timeseries(&[], 1, &target).unwrap_err().to_string();
    assert!(err.contains(&*blocker.to_string_lossy()), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn timeseries_round_trips_bit_exactly(
        rows in prop::collection::vec(
            (any::<f64>(), prop::collection::vec(any::<f64>(), 3), any::<f64>(), any::<f64>(), any::<f64>(), 0usize..1000),
            0..20,
        )
    ) {
        let finite = |v: f64| if v.is_finite() { v } else { 0.0 };
        let series: Vec<Diagnostics> = rows
            .into_iter()
            .map(|(t, m, k, p, d, f)| diag(finite(t), m.into_iter().map(finite).collect(), finite(k), finite(p), finite(d), f))
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        write_timeseries(&series, 3, &path).unwrap();
        let table = read_table(&path).unwrap();
        prop_assert_eq!(table.rows.len(), series.len());
        for (row, d) in table.rows.iter().zip(&series) {
            let mut expected = vec![d.t];
            expected.extend(&d.masses);
            expected.extend([d.kinetic, d.potential, d.dissipation, d.floor_events as f64]);
            for (a, b) in row.iter().zip(&expected) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn snapshot_round_trips_bit_exactly(
        values in prop::collection::vec((0.0f64..1e6, -1e6f64..1e6, 0.0f64..1e-300, -1e-300f64..1e-300), 4..16)
    ) {
        let n = values.len();
        let grid = common::periodic(3.7, n);
        let state = MixtureState::new(
            ModelVariant::Modified,
            vec![values.iter().map(|v| v.0).collect(), values.iter().map(|v| v.2).collect()],
            vec![values.iter().map(|v| v.1).collect(), values.iter().map(|v| v.3).collect()],
        ).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        write_snapshot(&state, &grid, &path).unwrap();
        let table = read_table(&path).unwrap();
        let cols = ["rho_1", "rho_2", "u_1", "u_2"];
        let fields = [&state.rho[0], &state.rho[1], &state.u[0], &state.u[1]];
        for (name, field) in cols.iter().zip(fields) {
            let col = table.column(name).unwrap();
            prop_assert!(col.iter().zip(field).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
        let x = table.column("x").unwrap();
        prop_assert!(x.iter().zip(grid.centers()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn config_render_round_trips(
        n in 1usize..4,
        variant in prop::sample::select(vec!["original", "modified"]),
        diag_mu in prop::collection::vec(0.01f64..5.0, 3),
        gamma in 1.01f64..4.0,
        k in 0.01f64..10.0,
        length in 0.1f64..10.0,
        n_cells in 3usize..2000,
        noslip in any::<bool>(),
        cfl in 0.01f64..0.9,
        dt_init in 1e-6f64..1.0,
        t_end in 0.0f64..100.0,
        cadence in 1usize..50,
        floor in prop::option::of(0.0f64..1e-3),
        amp in -0.5f64..0.5,
    ) {
        let mut mu = vec![0.0; n * n];
        for i in 0..n {
            mu[i * n + i] = diag_mu[i];
        }
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let n_laws = if variant == "original" { n } else { 1 };
        let mut text = format!(
            "[model]\nvariant = \"{variant}\"\nn = {n}\n[viscosity]\nmu = [{}]\n[pressure]\nk = [{}]\ngamma = [{}]\n\
             [grid]\nlength = {length:?}\nn_cells = {n_cells}\nbc = \"{}\"\n\
             [time]\ncfl = {cfl:?}\ndt_init = {dt_init:?}\nt_end = {t_end:?}\n",
            list(&mu),
            list(&vec![k; n_laws]),
            list(&vec![gamma; n_laws]),
            if noslip { "noslip" } else { "periodic" },
        );
        if let Some(f) = floor {
            text.push_str(&format!("density_floor = {f:?}\n"));
        }
        let density: Vec<String> = (0..n).map(|i| format!("\"sine(1, {amp:?}, {})\"", i + 1)).collect();
        text.push_str(&format!("[initial]\ndensity = [{}]\n[output]\ncadence = {cadence}\ndirectory = \"runs/a b\"\n", density.join(", ")));

        let config = parse_config(&text).unwrap().config;
        let again = parse_config(&config.render()).unwrap().config;
        prop_assert_eq!(config, again);
    }
}

/// Each entry breaks one invariant and must name the offending field.
const INVALID: &[(&str, &str)] = &[
    ("[model]\nn = 1\n[viscosity]\nmu = [-0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\n", "viscosity.mu"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\nlambda = [-1.0]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\n", "viscosity.lambda"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 0.8\n[grid]\nn_cells = 16\n", "pressure.gamma"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\nk = 0\n[grid]\nn_cells = 16\n", "pressure.k"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 2\n", "grid.n_cells"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\nlength = -1\n", "grid.length"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\nbc = \"open\"\n", "grid.bc"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\n[time]\ncfl = 0.95\n", "time.cfl"),
    ("[model]\nn = 1\nvariant = \"hybrid\"\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\n", "model.variant"),
    ("[model]\nn = 2\n[viscosity]\nmu = [0.2, 0.0, 0.0]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\n", "viscosity.mu"),
    ("[model]\nn = 2\n[viscosity]\nmu = [0.2, 0.0, 0.0, 0.2]\n[pressure]\ngamma = 2.0\n[exchange]\na = [0, 1, 2]\n[grid]\nn_cells = 16\n", "exchange.a"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\n[initial]\ndensity = [\"wobble(1)\"]\n", "initial.density"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\ngamma = 2.0\n[grid]\nn_cells = 16\ncolour = 3\n", "grid.colour"),
    ("[model]\nn = 1\n[viscosity]\nmu = [0.2]\n[pressure]\nkind = \"tabulated\"\nrho = [1.0, 0.5]\np = [1.0, 2.0]\n[grid]\nn_cells = 16\n", "pressure.rho"),
];

#[test]
fn invalid_corpus_names_each_violated_field() {
    for (text, field) in INVALID {
        let errors = parse_config(text).expect_err(field);
        assert!(
            errors.0.iter().any(|e| e.field.starts_with(field)),
            "expected an error on {field}, got: {errors}"
        );
    }
}

#[test]
fn constant_case_needs_no_forcing() {
    for variant in [ModelVariant::Original, ModelVariant::Modified] {
        let n = 3;
        let visc = common::random_full_viscosity(2, n, 0.1, 0.4);
        let laws = match variant {
            ModelVariant::Original => vec![common::polytropic(1.0, 2.0); n],
            ModelVariant::Modified => vec![common::polytropic(1.0, 2.0)],
        };
        let params = MixtureParams::new(variant.model(), visc, laws, None, BodyForce::zero()).unwrap();
        let force = manufactured_forcing(manufactured_case("constant", n, 1.0).unwrap(), &params);
        for i in 0..n {
            for s in 0..50 {
                assert!(force.eval(i, s as f64 / 50.0, 0.3).abs() <= 1e-14);
            }
        }
    }
}

#[test]
fn sine_decay_forcing_matches_the_hand_formula() {
    let length = 2.0;
    let nu = 0.3;
    let k = TAU / length;
    let visc = ViscosityMatrices::diagonal(1, nu / 2.0, 0.0).unwrap();
    let params = MixtureParams::new(ModelVariant::Original.model(), visc, vec![common::polytropic(1.0, 2.0)], None, BodyForce::zero()).unwrap();
    let force = manufactured_forcing(manufactured_case("sine-decay", 1, length).unwrap(), &params);
    for s in 0..100 {
        let x = length * s as f64 / 100.0;
        for t in [0.0, 0.4, 1.7] {
            let hand = (nu * k * k - 1.0) * (k * x).sin() * (-t as f64).exp()
                + k * (2.0 * k * x).sin() * (-2.0 * t as f64).exp();
            assert!((force.eval(0, x, t) - hand).abs() <= 1e-10);
        }
    }
}

#[test]
fn symmetric_pair_gets_identical_forcing() {
    let visc = ViscosityMatrices::from_row_major(2, &[0.3, 0.1, 0.1, 0.3], &[0.05, 0.0, 0.0, 0.05]).unwrap();
    let laws = vec![common::polytropic(1.0, 2.0); 2];
    let params = MixtureParams::new(ModelVariant::Original.model(), visc, laws, None, BodyForce::zero()).unwrap();
    let force = manufactured_forcing(manufactured_case("sine-decay", 2, 1.0).unwrap(), &params);
    for s in 0..64 {
        let x = s as f64 / 64.0;
        assert_eq!(force.eval(0, x, 0.2), force.eval(1, x, 0.2));
    }
}

#[test]
fn catalog_residuals_vanish_on_fine_grids() {
    for name in case_registry().names() {
        for variant in [ModelVariant::Original, ModelVariant::Modified] {
            for n in [1usize, 2, 3] {
                let visc = common::random_full_viscosity(7, n, 0.1, 0.4);
                let laws = match variant {
                    ModelVariant::Original => (0..n).map(|i| common::polytropic(1.0 + 0.5 * i as f64, 1.6 + 0.2 * i as f64)).collect(),
                    ModelVariant::Modified => vec![common::polytropic(1.0, 2.0)],
                };
                let exchange = (variant == ModelVariant::Original && n > 1)
                    .then(|| multiflow_core::ExchangeMatrix::from_row_major(n, &vec![0.7; n * n]).unwrap());
                let params = MixtureParams::new(variant.model(), visc, laws, exchange, BodyForce::zero()).unwrap();
                let case: Arc<dyn ManufacturedCase> = manufactured_case(name, n, 1.5).unwrap();
                let r = manufactured_residual(&case, &params, 1.5, 512, 0.0);
                assert!(r.momentum <= 1e-8, "{name} {variant} N={n}: momentum {:e}", r.momentum);
                assert_eq!(r.continuity.is_some(), case.satisfies_continuity(variant));
                if let Some(c) = r.continuity {
                    assert!(c <= 1e-8, "{name} {variant} N={n}: continuity {c:e}");
                }
            }
        }
    }
}

#[test]
fn sampled_case_matches_jets() {
    let case = manufactured_case("travelling-wave", 2, 1.0).unwrap();
    let x: Vec<f64> = (0..10).map(|j| j as f64 / 10.0).collect();
    let state = sample_case(case.as_ref(), ModelVariant::Modified, 2, &x, 0.25).unwrap();
    for (j, &x) in x.iter().enumerate() {
        assert_eq!(state.rho[1][j], case.jet(1, x, 0.25).rho);
        assert_eq!(state.u[0][j], case.jet(0, x, 0.25).u);
    }
    assert!(manufactured_case("nonexistent", 1, 1.0).is_err());
}

#[test]
fn timeseries_text_is_deterministic() {
    let series = vec![diag(0.0, vec![1.0], 0.5, 0.25, 0.0, 0), diag(0.1, vec![1.0], 0.4, 0.25, 1e-3, 0)];
    assert_eq!(render_timeseries(&series, 1), render_timeseries(&series, 1));
    assert!(render_timeseries(&series, 1).contains("1.0000000000000000e0"));
}
