use std::path::PathBuf;

use proptest::collection::vec;
use proptest::prelude::*;
use spinsync::measures::MomentTarget;
use spinsync::SystemConfig;
use spinsync_cli::config::{Axis, FieldRef, Format, LocusKind, Param, Scale, Solver, Units};
use spinsync_cli::quantity::EntropyBase;
use spinsync_cli::{parse_config, JobSpec, Mode, Quantity};

const FIG4: &str = "\
# three undriven spins, Fig. 4 coupling
[job]
mode = dist
outputs = m1_AB, m1_BC, m1_CA, m2_CA

[system]
n_spins = 3
gamma = 1
omega = 0
g = 0.12, 0.12

[dist]
samples = 360
joint = true
";

fn positive() -> impl Strategy<Value = f64> {
    (1e-3f64..10.0).prop_map(|x| (x * 1e6).round() / 1e6)
}

fn system() -> impl Strategy<Value = SystemConfig> {
    (1usize..=3).prop_flat_map(|n| {
        (vec(positive(), n), vec(positive(), n), vec(0.0f64..2.0, n), vec(0.0f64..2.0, n - 1)).prop_map(
            move |(gamma_g, gamma_d, omega, g)| SystemConfig { n_spins: n, gamma_g, gamma_d, omega, g },
        )
    })
}

fn field(n: usize) -> impl Strategy<Value = FieldRef> {
    let params = if n > 1 {
        vec![Param::GammaG, Param::GammaD, Param::Omega, Param::G]
    } else {
        vec![Param::GammaG, Param::GammaD, Param::Omega]
    };
    (proptest::sample::select(params), 0..n).prop_map(move |(param, k)| {
        let len = if param == Param::G { n - 1 } else { n };
        FieldRef { param, index: k % len }
    })
}

fn axis(n: usize, avoid: Option<FieldRef>) -> impl Strategy<Value = Axis> {
    (vec(field(n), 1..3), any::<bool>(), positive(), 0.0f64..5.0, 1usize..60).prop_map(
        move |(mut fields, log, min, span, count)| {
            fields.dedup();
            fields.retain(|f| Some(*f) != avoid);
            if fields.is_empty() {
                fields.push(FieldRef { param: Param::GammaG, index: n - 1 });
                if Some(fields[0]) == avoid {
                    fields[0].param = Param::GammaD;
                }
            }
            Axis { fields, scale: if log { Scale::Log } else { Scale::Linear }, min, max: min + span, count }
        },
    )
}

fn quantity(n: usize) -> impl Strategy<Value = Quantity> {
    let pair = if n > 1 { (0..n, 1..n).prop_map(move |(i, d)| (i, (i + d) % n)).boxed() } else { Just((0, 0)).boxed() };
    (0..n, pair, 0u8..8, 1u8..=2).prop_map(move |(j, (a, b), kind, order)| match (kind, n) {
        (0, _) | (_, 1) if kind < 7 => Quantity::Moment { target: MomentTarget::Site(j), order },
        (1, _) => Quantity::Moment { target: MomentTarget::Pair(a, b), order },
        (2, _) => Quantity::MutualInformation(a, b),
        (3, _) => Quantity::Negativity(a, b),
        (4, _) => Quantity::Correlation { order: order as u32, i: a, j: b },
        (5, _) => Quantity::Entropy(j),
        (6, _) => Quantity::ZSymmetry,
        _ => Quantity::PMax,
    })
}

fn job() -> impl Strategy<Value = JobSpec> {
    system().prop_flat_map(|sys| {
        let n = sys.n_spins;
        let modes = if n > 1 {
            vec![Mode::Steady, Mode::Dist, Mode::Sweep2d, Mode::Locus, Mode::Perturb, Mode::Entangle]
        } else {
            vec![Mode::Steady, Mode::Dist, Mode::Sweep2d, Mode::Locus, Mode::Perturb]
        };
        let grid = axis(n, None).prop_flat_map(move |x| {
            let first = x.fields[0];
            (Just(x), axis(n, Some(first)))
        });
        (
            Just(sys),
            proptest::sample::select(modes),
            grid,
            vec(quantity(n), 0..5),
            any::<bool>(),
            0usize..9,
            (1usize..1000, any::<bool>()),
            (vec(positive(), 1..4), positive(), proptest::option::of((1e-4f64..0.5, 1.0f64..9.0))),
            (1usize..=8, vec((0u32..4, 0u32..4), 0..4), any::<bool>()),
        )
            .prop_map(
                move |(system, mode, (x, mut y), outputs, json, workers, (samples, joint), (g, omega, bracket), (max_order, monos, weights))| {
                    y.fields.retain(|f| !x.fields.contains(f));
                    if y.fields.is_empty() {
                        y.fields = vec![FieldRef { param: Param::GammaD, index: 0 }];
                        if x.fields.contains(&y.fields[0]) {
                            y.fields[0].param = Param::GammaG;
                        }
                        if x.fields.contains(&y.fields[0]) {
                            y.fields[0].param = Param::Omega;
                        }
                    }
                    let mut spec = JobSpec { mode, system, outputs, workers, ..JobSpec::default() };
                    spec.grid.x = x;
                    spec.grid.y = y;
                    spec.format = if json { Format::Json } else { Format::Csv };
                    spec.entropy_base = if json { EntropyBase::Two } else { EntropyBase::E };
                    if workers % 2 == 0 {
                        spec.out = Some(PathBuf::from(format!("runs/job_{workers}.csv")));
                    }
                    spec.dist.samples = samples;
                    spec.dist.joint = joint;
                    spec.locus.g = g;
                    spec.locus.omega = omega;
                    spec.locus.bracket = bracket.map(|(lo, w)| (lo, lo * w));
                    spec.locus.target = [LocusKind::M1A, LocusKind::M1AB, LocusKind::Width][workers % 3];
                    spec.locus.units = if joint { Units::Sum } else { Units::GammaD };
                    spec.locus.solver = if joint { Solver::Exact } else { Solver::Asymptotic };
                    spec.perturb.max_order = max_order;
                    spec.perturb.monomials = monos.into_iter().filter(|(a, b)| a + b > 0).collect();
                    spec.perturb.target = MomentTarget::Site(n - 1);
                    if weights {
                        spec.perturb.drive = Some(vec![0.5; n]);
                        spec.perturb.coupling = (n > 1).then(|| vec![1.0; n - 1]);
                    }
                    spec
                },
            )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_then_parse_is_identity(spec in job()) {
        spec.validate().unwrap();
        let text = spec.to_string();
        let back = parse_config(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn fig4_config_round_trips() {
    let spec = parse_config(FIG4).unwrap();
    assert_eq!(spec.mode, Mode::Dist);
    assert_eq!(spec.system.n_spins, 3);
    assert_eq!(spec.system.g, [0.12, 0.12]);
    assert_eq!(spec.system.omega, [0.0; 3]);
    let again = parse_config(&spec.to_string()).unwrap();
    assert_eq!(again, spec);
}

#[test]
fn minimal_config_defaults() {
    let spec = parse_config("[system]\ngamma_g = 1\ngamma_d = 1\n").unwrap();
    assert_eq!(spec.mode, Mode::Steady);
    assert_eq!(spec.system, SystemConfig::equal_rates(2, 1.0));
    assert!(spec.system.omega.iter().chain(&spec.system.g).all(|&x| x == 0.0));
    assert_eq!(spec.grid.x.count, 50);
    assert_eq!(spec.dist.samples, 360);
    assert_eq!(spec.format, Format::Csv);
}

#[test]
fn negative_rate_names_the_field() {
    let err = parse_config("[system]\ngamma_g = 1, 1\ngamma_d = 1, -0.5\n").unwrap_err();
    assert_eq!(err.field, "system.gamma_d[1]", "{err}");
    assert!(err.to_string().contains("gamma_d"));
}

#[test]
fn diagnostics_carry_line_numbers() {
    let err = parse_config("[job]\nmode = steady\nmode = dist\n").unwrap_err();
    assert_eq!(err.line, Some(3));
    let err = parse_config("[job]\nmood = steady\n").unwrap_err();
    assert_eq!(err.line, Some(2));
    assert!(err.to_string().contains("mood"));
    let err = parse_config("[system]\nn_spins = 2\ng = 0.1, 0.2\n").unwrap_err();
    assert!(err.field.starts_with("system.g"), "{err}");
    let err = parse_config("[jobs]\n").unwrap_err();
    assert_eq!(err.line, Some(1));
    assert!(parse_config("mode = steady\n").is_err());
    assert!(parse_config("[job]\nmode = perturb\n[system]\nn_spins = 1\n[perturb]\nmoment = m1_A\ncoupling = 1\n").is_err());
    assert!(parse_config("[job]\noutputs = m1_C\n").is_err());
    assert!(parse_config("[job]\nmode = sweep2d\n[grid]\nx_min = 0\n").is_err());
}

#[test]
fn grid_shorthands() {
    let spec = parse_config("[job]\nmode = sweep2d\n[system]\nn_spins = 3\n[grid]\nx_field = gamma\ny_field = g\n").unwrap();
    assert_eq!(spec.grid.x.fields.len(), 6);
    assert_eq!(spec.grid.y.label(), "g.0+g.1");
    let spec = parse_config("[system]\ngamma = 0.5\nomega = 0.1\n").unwrap();
    assert_eq!(spec.system.gamma_d, [0.5, 0.5]);
    assert_eq!(spec.system.omega, [0.1, 0.1]);
}
