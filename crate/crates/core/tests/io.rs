use crossgreen_core::energy::energy;
use crossgreen_core::geometry::{Configuration, Manifold};
use crossgreen_core::io::{
    configuration_from_json, configuration_to_json, kernel_table_csv, kernel_table_from_csv,
    radial_table_csv, to_json, trace_csv, KERNEL_TABLE_HEADER,
};
use crossgreen_core::kernel::build_green;
use crossgreen_core::optimize::TraceEntry;
use crossgreen_core::quadrature::QuadratureSpec;
use crossgreen_core::radial::RadialGeometry;
use crossgreen_core::{EnergyReport, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cp3_configuration_round_trips_bit_exactly() {
    let m = Manifold::complex_projective(3).unwrap();
    let c = Configuration::random(m, 100, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let text = configuration_to_json(&c).unwrap();
    let back = configuration_from_json(&text).unwrap();
    assert_eq!(back, c);
    assert!(text.starts_with(r#"{"manifold":{"family":"CP","n":3},"points":[[["#));
}

#[test]
fn scalar_layouts() {
    let s = Manifold::sphere(2).unwrap();
    let c = configuration_from_json(r#"{"manifold":{"family":"S","n":2},"points":[[0,0,1],[1,0,0]]}"#).unwrap();
    assert_eq!(c.manifold(), s);
    let text = configuration_to_json(&c).unwrap();
    assert!(text.contains("[0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0]"));

    let hp = r#"{"manifold":{"family":"HP","n":1},"points":[[[0,0,1,0],[0,0,0,0]]]}"#;
    let c = configuration_from_json(hp).unwrap();
    // canonical gauge makes the leading scalar real and positive
    assert_eq!(c.points()[0].coords()[..4], [1.0, 0.0, 0.0, 0.0]);
}

fn schema_path(text: &str) -> String {
    match configuration_from_json(text) {
        Err(Error::Schema { path, .. }) => path,
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn schema_errors_carry_paths() {
    assert_eq!(
        schema_path(r#"{"manifold":{"family":"S","n":2},"points":[[0,0,1],[1,0]]}"#),
        "points[1]"
    );
    assert_eq!(
        schema_path(r#"{"manifold":{"family":"CP","n":1},"points":[[[1,0],[0]]]}"#),
        "points[0][1]"
    );
    assert_eq!(
        schema_path(r#"{"manifold":{"family":"S","n":2},"points":[[0,0,2]]}"#),
        "points[0]"
    );
    assert_eq!(schema_path(r#"{"manifold":{"family":"XX","n":2},"points":[]}"#), "manifold.family");
    assert_eq!(schema_path(r#"{"manifold":{"family":"OP","n":2},"points":[]}"#), "manifold");
    assert_eq!(schema_path(r#"{"manifold":{"family":"S","n":2}}"#), "points");
    assert_eq!(schema_path("not json"), "$");
}

#[test]
fn tables_have_fixed_headers() {
    let m = Manifold::complex_projective(3).unwrap();
    let k = build_green(m, &QuadratureSpec::default()).unwrap();
    let rows = k.table(16).unwrap();
    let text = kernel_table_csv(&rows);
    assert!(text.starts_with(&format!("{KERNEL_TABLE_HEADER}\n")));
    assert_eq!(kernel_table_from_csv(&text).unwrap(), rows);

    let radial = radial_table_csv(&RadialGeometry::new(m).table(4).unwrap());
    assert!(radial.starts_with("r,v,tail,L,cdf\n"));
    assert_eq!(radial.lines().count(), 5);

    let trace = trace_csv(&[TraceEntry {
        iteration: 3,
        energy: -1.5,
        grad_norm: 0.25,
    }]);
    assert_eq!(trace, "iteration,energy,grad_norm\n3,-1.5000000000000000e0,2.5000000000000000e-1\n");
}

#[test]
fn energy_report_json() {
    let m = Manifold::sphere(2).unwrap();
    let c = Configuration::random(m, 5, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    let rep = energy(&c, &build_green(m, &QuadratureSpec::default()).unwrap()).unwrap();
    let text = to_json(&rep).unwrap();
    let back: EnergyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep);
}

proptest! {
    #[test]
    fn floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = to_json(&x).unwrap();
        let back: f64 = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn configurations_round_trip(seed in any::<u64>(), which in 0usize..4, n in 1usize..20) {
        let m = [
            Manifold::sphere(3).unwrap(),
            Manifold::real_projective(2).unwrap(),
            Manifold::complex_projective(2).unwrap(),
            Manifold::quaternion_projective(2).unwrap(),
        ][which];
        let c = Configuration::random(m, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let back = configuration_from_json(&configuration_to_json(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}
