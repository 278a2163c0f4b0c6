#![allow(dead_code)]

use num_complex::Complex;
use seqchain::densemat::{pauli, CMatrix};
use seqchain::gates::{
    conjugated_gate, controlled_rotation, macroscopic_family, random_gate, random_single_qubit, squeezing_gate,
    weyl_gate, Gate,
};
use std::f64::consts::{FRAC_PI_2, PI};

pub type M = CMatrix<f64>;

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &M) -> M {
    let norm = a.max_abs() * a.rows() as f64;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(s as i32));
    let mut term = M::identity(a.rows());
    let mut sum = M::identity(a.rows());
    for k in 1..30 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `−(i/2)(α XX + β YY + γ ZZ)` exponentiated independently of the library.
pub fn weyl_oracle(alpha: f64, beta: f64, gamma: f64) -> M {
    let (x, y, z) = (pauli::x::<f64>(), pauli::y::<f64>(), pauli::z::<f64>());
    let h = &(&x.kron(&x).scale_real(alpha) + &y.kron(&y).scale_real(beta)) + &z.kron(&z).scale_real(gamma);
    expm(&h.scale(Complex::new(0.0, -0.5)))
}

/// Every parametric family at a few representative parameter points.
pub fn family_gates() -> Vec<(String, Gate<f64>)> {
    let mut out = vec![
        ("identity".to_string(), Gate::identity()),
        ("weyl(0.7,pi/2,pi/2)".into(), weyl_gate(0.7, FRAC_PI_2, FRAC_PI_2)),
        ("weyl(pi/2,0.4,pi/2)".into(), weyl_gate(FRAC_PI_2, 0.4, FRAC_PI_2)),
        ("weyl(0.3,1.1,-0.4)".into(), weyl_gate(0.3, 1.1, -0.4)),
        (
            "weyl(pi/2,pi/2,pi/2)".into(),
            weyl_gate(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
        ),
    ];
    for a in [PI, PI - 0.1, PI - 0.4, 1.0] {
        out.push((format!("controlled_rotation({a})"), controlled_rotation(a)));
    }
    for t in [0.1, 0.3, 0.785, 1.2, 1.5] {
        out.push((format!("squeezing({t})"), squeezing_gate(t)));
    }
    for (p, th, thp) in [(0.5, 0.3, 1.1), (0.0, 0.7, 0.2), (1.0, 0.0, 0.9), (0.25, 2.0, -1.0)] {
        out.push((
            format!("macroscopic_family({p},{th},{thp})"),
            macroscopic_family(p, th, thp, 3).unwrap(),
        ));
    }
    let r = random_single_qubit::<f64>(4);
    out.push((
        "conjugated(weyl(0,pi/2,pi/2))".into(),
        conjugated_gate(&weyl_gate(0.0, FRAC_PI_2, FRAC_PI_2), &r, &r).unwrap(),
    ));
    out.push((
        "conjugated(controlled_rotation(pi-0.4))".into(),
        conjugated_gate(&controlled_rotation(PI - 0.4), &r, &random_single_qubit(5)).unwrap(),
    ));
    out
}

pub fn random_gates(count: u64) -> impl Iterator<Item = (String, Gate<f64>)> {
    (0..count).map(|s| (format!("random({s})"), random_gate(s)))
}
