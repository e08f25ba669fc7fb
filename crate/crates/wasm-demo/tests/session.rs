use nsprox_wasm::{Kind, Session};

#[test]
fn kinds_parse() {
    assert_eq!(Kind::parse("taylor_green"), Some(Kind::TaylorGreen));
    assert_eq!(Kind::parse("abc"), Some(Kind::Abc));
    assert_eq!(Kind::parse("random_band"), Some(Kind::RandomBand));
    assert_eq!(Kind::parse("vortex"), None);
}

#[test]
fn taylor_green_starts_as_eigenfunction_and_decays() {
    let mut s = Session::new(Kind::TaylorGreen, 16, 1.0, 0).unwrap();
    let d0 = s.diagnostics().unwrap();
    assert!(d0.inf_l2 <= 1e-12 * d0.palinstrophy_sq.sqrt());
    assert!((d0.lambda0 - 3.0).abs() <= 1e-12);
    s.advance(20).unwrap();
    let d1 = s.diagnostics().unwrap();
    assert!(d1.energy < d0.energy);
    assert!(d1.t > 0.0 && d1.step == 20);
    assert!(d1.divergence_defect <= 1e-12);
}

#[test]
fn random_band_is_seeded() {
    let a = Session::new(Kind::RandomBand, 16, 1.0, 7).unwrap();
    let b = Session::new(Kind::RandomBand, 16, 1.0, 7).unwrap();
    let c = Session::new(Kind::RandomBand, 16, 1.0, 8).unwrap();
    assert_eq!(a.field(), b.field());
    assert_ne!(a.field(), c.field());
    assert!(a.stable_dt() > 0.0);
}

#[test]
fn speed_slice_matches_plane() {
    let s = Session::new(Kind::Abc, 16, 1.0, 0).unwrap();
    let slice = s.speed_slice();
    assert_eq!(slice.len(), 16 * 16);
    // ABC on x = 0: (A sin z + C cos y, A cos z, C sin y + B)
    let (a, b, c) = (1.0f64, 0.7f64, 0.4f64);
    for (i, v) in slice.iter().enumerate() {
        let (y, z) = ((i / 16) as f64, (i % 16) as f64);
        let (y, z) = (y * std::f64::consts::TAU / 16.0, z * std::f64::consts::TAU / 16.0);
        let u = [a * z.sin() + c * y.cos(), a * z.cos(), c * y.sin() + b];
        let speed = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        assert!((*v as f64 - speed).abs() <= 1e-6, "{i}");
    }
}
