use num_complex::Complex64;

use super::expr::{eval_complex, eval_real};
use super::grid::{parse_bloch, parse_lengths, parse_params, parse_values};
use super::output::{flag, num, opt, Table};
use super::{CliError, Outcome, RunArgs};
use crate::correlators::{additive_variance_exact, collective_mean, one_point, two_point, VarianceMethod};
use crate::gates::{gate_from_family, load_gate_file};
use crate::macroscopicity::{classify_macroscopic, neff_optimize_with_tol, neff_with_tol, variance_sweep};
use crate::oracle::{sweep_with_cap, DEFAULT_CAP};
use crate::squeezing::{fig4_curve, sm_bound, unit_grid};
use crate::transfer::TransferSet;
use crate::{ChainSpec64, Gate64, LocalObservable64, Real};

/// Oracle rows in `fig3` stop here.
const FIG3_ORACLE_MAX: usize = 10;
const BOUND_GRID: usize = 201;

type Cmd = Result<Outcome, CliError>;

fn param_names(family: &str, count: usize) -> Vec<String> {
    let names: &[&str] = match family {
        "weyl" => &["alpha", "beta", "gamma"],
        "controlled_rotation" => &["a"],
        "squeezing" => &["chi_t"],
        "macroscopic_family" => &["p", "theta", "theta_p", "seed"],
        "random" => &["seed"],
        _ => &[],
    };
    if names.len() == count {
        names.iter().map(|s| s.to_string()).collect()
    } else {
        (1..=count).map(|k| format!("p{k}")).collect()
    }
}

struct GateSet {
    names: Vec<String>,
    gates: Vec<(Vec<f64>, Gate64)>,
}

impl GateSet {
    fn header(&self, rest: &[&str]) -> Table {
        Table::new(self.names.iter().map(String::as_str).chain(rest.iter().copied()))
    }

    fn prefix(&self, params: &[f64], rest: Vec<String>) -> Vec<String> {
        self.names
            .iter()
            .zip(params)
            .map(|(name, &p)| {
                if name == "seed" {
                    format!("{}", p as u64)
                } else {
                    num(p)
                }
            })
            .chain(rest)
            .collect()
    }
}

fn gate_set(args: &mut RunArgs, default_family: Option<&str>) -> Result<GateSet, CliError> {
    if let Some(path) = &args.gate_file {
        if args.gate.is_some() || args.params.is_some() {
            return Err(CliError::input(
                "--gate-file cannot be combined with --gate or --params",
            ));
        }
        let tol = *args.unitary_tol.get_or_insert(f64::UNITARY_TOL);
        let gate = load_gate_file(path, tol).map_err(|e| match e {
            crate::Error::Io(io) => CliError::input(format!("{path}: {io}")),
            other => other.into(),
        })?;
        return Ok(GateSet {
            names: Vec::new(),
            gates: vec![(Vec::new(), gate)],
        });
    }
    let family = match (&args.gate, default_family) {
        (Some(g), _) => g.clone(),
        (None, Some(d)) => {
            args.gate = Some(d.to_string());
            d.to_string()
        }
        (None, None) => return Err(CliError::input("one of --gate or --gate-file is required")),
    };
    let combos = parse_params(args.params.as_deref().unwrap_or(""))?;
    let gates = combos
        .into_iter()
        .map(|p| gate_from_family::<f64>(&family, &p).map(|g| (p, g)))
        .collect::<crate::Result<Vec<_>>>()?;
    let count = gates.first().map_or(0, |g| g.0.len());
    Ok(GateSet {
        names: param_names(&family, count),
        gates,
    })
}

fn amplitude(src: &str) -> Result<Complex64, CliError> {
    Ok(eval_complex(src)?)
}

fn chain(args: &mut RunArgs, n: usize, default: (&str, &str)) -> Result<ChainSpec64, CliError> {
    let c0 = amplitude(args.c0.get_or_insert_with(|| default.0.into()))?;
    let c1 = amplitude(args.c1.get_or_insert_with(|| default.1.into()))?;
    Ok(ChainSpec64::new(n, c0, c1)?)
}

fn explicit_observable(args: &RunArgs) -> Result<Option<LocalObservable64>, CliError> {
    match (&args.bloch, &args.theta) {
        (Some(_), Some(_)) => Err(CliError::input("--bloch and --theta are mutually exclusive")),
        (Some(b), None) => Ok(Some(LocalObservable64::bloch(parse_bloch(b)?)?)),
        (None, Some(t)) => Ok(Some(LocalObservable64::transverse(eval_real(t)?))),
        (None, None) => Ok(None),
    }
}

fn observable_or_z(args: &mut RunArgs) -> Result<LocalObservable64, CliError> {
    if args.bloch.is_none() && args.theta.is_none() {
        args.bloch = Some("0,0,1".into());
    }
    Ok(explicit_observable(args)?.expect("default set"))
}

fn eig_tol(args: &mut RunArgs) -> f64 {
    *args.tol.get_or_insert(f64::EIG_TOL)
}

fn agrees(value: f64, reference: f64, tol: f64) -> bool {
    (value - reference).abs() <= tol * reference.abs().max(1.0)
}

fn relative_dev(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

pub fn spectrum(args: &mut RunArgs) -> Cmd {
    let tol = eig_tol(args);
    let set = gate_set(args, None)?;
    let mut table = set.header(&[
        "index",
        "re",
        "im",
        "modulus",
        "unit",
        "unit_dimension",
        "diagonalizable",
        "macroscopic",
    ]);
    for (params, gate) in &set.gates {
        let ts = TransferSet::new(gate, ChainSpec64::ground(2)?);
        let sd = ts.spectral(tol)?;
        let cls = classify_macroscopic(gate, tol)?;
        let mut order: Vec<usize> = (0..sd.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (sd.eigenvalues[i], sd.eigenvalues[j]);
            b.norm()
                .partial_cmp(&a.norm())
                .unwrap()
                .then(b.re.partial_cmp(&a.re).unwrap())
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        for (k, &i) in order.iter().enumerate() {
            let z = sd.eigenvalues[i];
            table.push(set.prefix(
                params,
                vec![
                    k.to_string(),
                    num(z.re),
                    num(z.im),
                    num(z.norm()),
                    flag(sd.is_unit(i)),
                    sd.unit_dimension().to_string(),
                    flag(sd.diagonalizable),
                    flag(cls.is_macroscopic),
                ],
            ));
        }
    }
    Ok(Outcome { table, failure: None })
}

pub fn fig3(args: &mut RunArgs) -> Cmd {
    if args.gate_file.is_none() && args.gate.is_none() && args.params.is_none() {
        args.params = Some("pi-0.4:pi:5".into());
    }
    let set = gate_set(args, Some("controlled_rotation"))?;
    let lengths = parse_lengths(args.n_range.get_or_insert_with(|| "2:10,12:1000:24".into()))?;
    let first = *lengths.first().ok_or_else(|| CliError::input("empty --n-range"))?;
    let chain = chain(args, first, ("sqrt(1/2)", "sqrt(1/2)"))?;
    let a = observable_or_z(args)?;
    let check = *args.check_tol.get_or_insert(1e-8);
    let cap = *args.cap.get_or_insert(DEFAULT_CAP);

    let mut table = set.header(&["n", "variance", "slope", "oracle_variance", "oracle_match"]);
    let mut mismatches = 0usize;
    for (params, gate) in &set.gates {
        for row in variance_sweep(gate, &chain, &a, &lengths)? {
            let (oracle, matched) = if row.n <= FIG3_ORACLE_MAX {
                let o = sweep_with_cap(gate, &chain.with_len(row.n)?, cap)?.collective_variance(&a)?;
                let ok = agrees(row.variance, o, check);
                mismatches += usize::from(!ok);
                (Some(o), flag(ok))
            } else {
                (None, String::new())
            };
            table.push(set.prefix(
                params,
                vec![
                    row.n.to_string(),
                    num(row.variance),
                    opt(row.slope),
                    opt(oracle),
                    matched,
                ],
            ));
        }
    }
    let failure =
        (mismatches > 0).then(|| format!("{mismatches} row(s) disagree with the state-vector oracle beyond {check:e}"));
    Ok(Outcome { table, failure })
}

pub fn fig4(args: &mut RunArgs) -> Cmd {
    let chi = parse_values(args.chi_t.get_or_insert_with(|| "0.04:1.56:39".into()))?;
    let grid = unit_grid::<f64>(BOUND_GRID);
    let sep = sm_bound(0.5, &grid)?;
    let pair = sm_bound(1.0, &grid)?;
    let mut table = Table::new([
        "chi_t",
        "theta",
        "m",
        "v",
        "f_half",
        "f_one",
        "below_separable",
        "below_pairwise",
    ]);
    for p in fig4_curve(&chi, &sep, &pair)? {
        table.push(vec![
            num(p.chi_t),
            num(p.theta),
            num(p.m),
            num(p.v),
            opt(p.f_half),
            opt(p.f_one),
            flag(p.below_separable),
            flag(p.below_pairwise),
        ]);
    }
    Ok(Outcome { table, failure: None })
}

pub fn neff(args: &mut RunArgs) -> Cmd {
    let tol = eig_tol(args);
    let set = gate_set(args, None)?;
    let n = *args.n.get_or_insert(2);
    let chain = chain(args, n, ("1", "0"))?;
    let fixed = explicit_observable(args)?;
    let mut table = set.header(&["unit_dimension", "nx", "ny", "nz", "neff", "optimized"]);
    for (params, gate) in &set.gates {
        let dim = TransferSet::new(gate, chain).spectral(tol)?.unit_dimension();
        let (dir, value, optimized) = match &fixed {
            Some(a) => {
                let dir = a.bloch_vector().expect("bloch observable");
                (dir, neff_with_tol(gate, &chain, dir, tol)?, false)
            }
            None => {
                let r = neff_optimize_with_tol(gate, &chain, tol)?;
                (r.best_direction, r.neff_coeff, true)
            }
        };
        table.push(set.prefix(
            params,
            vec![
                dim.to_string(),
                num(dir[0]),
                num(dir[1]),
                num(dir[2]),
                num(value),
                flag(optimized),
            ],
        ));
    }
    Ok(Outcome { table, failure: None })
}

pub fn correlate(args: &mut RunArgs) -> Cmd {
    let set = gate_set(args, None)?;
    let n = *args.n.get_or_insert(8);
    let chain = chain(args, n, ("1", "0"))?;
    let a = observable_or_z(args)?;
    let mut table = set.header(&["site", "one_point", "two_point_first", "connected_first"]);
    for (params, gate) in &set.gates {
        let ts = TransferSet::new(gate, chain);
        let first = one_point(&ts, &a, 1, n)?;
        for m in 1..=n {
            let one = one_point(&ts, &a, m, n)?;
            let two = if m == 1 {
                one_point(&ts, &a.squared(), 1, n)?
            } else {
                two_point(&ts, &a, 1, m, n)?
            };
            table.push(set.prefix(params, vec![m.to_string(), num(one), num(two), num(two - first * one)]));
        }
    }
    Ok(Outcome { table, failure: None })
}

#[derive(Default)]
struct Deviations {
    one: f64,
    two: f64,
    mean: f64,
    variance: f64,
}

impl Deviations {
    fn max(&self) -> f64 {
        self.one.max(self.two).max(self.mean).max(self.variance)
    }
}

fn compare(
    gate: &Gate64,
    chain: &ChainSpec64,
    a: &LocalObservable64,
    cap: usize,
    d: &mut Deviations,
) -> Result<(), CliError> {
    let n = chain.n;
    let psi = sweep_with_cap(gate, chain, cap)?;
    let ts = TransferSet::new(gate, *chain);
    for m in 1..=n {
        d.one = d
            .one
            .max(relative_dev(one_point(&ts, a, m, n)?, psi.expect_local(a, m)?));
        for k in m + 1..=n {
            d.two = d
                .two
                .max(relative_dev(two_point(&ts, a, m, k, n)?, psi.expect_pair(a, m, k)?));
        }
    }
    d.mean = d
        .mean
        .max(relative_dev(collective_mean(&ts, a, n)?, psi.collective_mean(a)?));
    let var = additive_variance_exact(&ts, a, n, VarianceMethod::Sweep)?.total;
    d.variance = d.variance.max(relative_dev(var, psi.collective_variance(a)?));
    Ok(())
}

pub fn oracle_check(args: &mut RunArgs) -> Cmd {
    let set = if args.gate.is_none() && args.gate_file.is_none() {
        let seed = *args.seed.get_or_insert(0);
        let count = *args.count.get_or_insert(20);
        let gates = (seed..seed + count as u64)
            .map(|s| (vec![s as f64], crate::gates::random_gate::<f64>(s)))
            .collect();
        GateSet {
            names: vec!["seed".into()],
            gates,
        }
    } else {
        gate_set(args, None)?
    };
    let lengths = parse_lengths(args.n_range.get_or_insert_with(|| "2:10".into()))?;
    let check = *args.check_tol.get_or_insert(1e-8);
    let cap = *args.cap.get_or_insert(DEFAULT_CAP);
    let chains: Vec<(Complex64, Complex64)> = if args.c0.is_some() || args.c1.is_some() {
        let c = chain(args, 2, ("1", "0"))?;
        vec![(c.c0, c.c1)]
    } else {
        vec![
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            (Complex64::new(0.5f64.sqrt(), 0.0), Complex64::new(0.5f64.sqrt(), 0.0)),
            (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)),
        ]
    };
    let observables = match explicit_observable(args)? {
        Some(a) => vec![a],
        None => vec![
            LocalObservable64::sigma_x(),
            LocalObservable64::sigma_y(),
            LocalObservable64::sigma_z(),
        ],
    };

    let mut table = set.header(&[
        "n",
        "max_dev_one_point",
        "max_dev_two_point",
        "max_dev_mean",
        "max_dev_variance",
        "pass",
    ]);
    let mut failed = 0usize;
    for (params, gate) in &set.gates {
        for &n in &lengths {
            let mut d = Deviations::default();
            for &(c0, c1) in &chains {
                let ch = ChainSpec64::new(n, c0, c1)?;
                for a in &observables {
                    compare(gate, &ch, a, cap, &mut d)?;
                }
            }
            let pass = d.max() <= check;
            failed += usize::from(!pass);
            table.push(set.prefix(
                params,
                vec![
                    n.to_string(),
                    num(d.one),
                    num(d.two),
                    num(d.mean),
                    num(d.variance),
                    flag(pass),
                ],
            ));
        }
    }
    let failure = (failed > 0).then(|| format!("{failed} of {} row(s) exceed {check:e}", table.len()));
    Ok(Outcome { table, failure })
}
