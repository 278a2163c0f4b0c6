use num_complex::Complex;

use seqchain::correlators::{additive_variance_exact, one_point, VarianceMethod};
use seqchain::gates::{random_gate, squeezing_gate, weyl_gate};
use seqchain::macroscopicity::neff;
use seqchain::oracle::sweep;
use seqchain::transfer::{ChainSpec, LocalObservable};
use seqchain::{Gate32, TransferSet32};

#[test]
fn f32_pipeline_tracks_f64() {
    for seed in 0..5 {
        let g32: Gate32 = random_gate(seed);
        let g64 = random_gate::<f64>(seed);
        let ch32 = ChainSpec::<f32>::plus(6).unwrap();
        let ch64 = ChainSpec::<f64>::plus(6).unwrap();
        let ts32 = TransferSet32::new(&g32, ch32);
        let ts64 = seqchain::TransferSet64::new(&g64, ch64);
        let a32 = LocalObservable::<f32>::sigma_x();
        let a64 = LocalObservable::<f64>::sigma_x();
        let v32 = additive_variance_exact(&ts32, &a32, 6, VarianceMethod::Sweep)
            .unwrap()
            .total;
        let v64 = additive_variance_exact(&ts64, &a64, 6, VarianceMethod::Sweep)
            .unwrap()
            .total;
        assert!((v32 as f64 - v64).abs() < 1e-4, "seed {seed}: {v32} vs {v64}");
        let psi = sweep(&g32, &ch32).unwrap();
        let d = one_point(&ts32, &a32, 3, 6).unwrap() - psi.expect_local(&a32, 3).unwrap();
        assert!(d.abs() < 1e-5);
    }
}

#[test]
fn f32_spectra_and_neff() {
    let ts = TransferSet32::new(&squeezing_gate(0.5f32), ChainSpec::ground(2).unwrap());
    let sd = ts.spectral(f32::EPSILON.sqrt()).unwrap();
    assert_eq!(sd.unit_dimension(), 1);
    let g = weyl_gate(0.7f32, std::f32::consts::FRAC_PI_2, std::f32::consts::FRAC_PI_2);
    let ch = ChainSpec::new(4, Complex::new(1.0f32, 0.0), Complex::new(0.0, 0.0)).unwrap();
    let v = neff(&g, &ch, [0.0, 1.0, 0.0]).unwrap();
    assert!((v - 0.7f32.cos().powi(2)).abs() < 1e-4);
}
