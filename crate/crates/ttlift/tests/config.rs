use ttlift::builtins;
use ttlift::config::{ConfigError, ModelConfig};
use ttlift::scalar::{Mode, Scalar};
use ttlift::small::ModelError;

#[test]
fn builtins_round_trip_byte_exactly() {
    for b in builtins::list() {
        let cfg = builtins::config(b.name, None, 7).unwrap();
        let s = cfg.to_json_string();
        let back = ModelConfig::from_json_str(&s).unwrap();
        assert_eq!(back, cfg, "{}", b.name);
        assert_eq!(back.to_json_string(), s, "{}", b.name);
        back.build().unwrap();
    }
}

#[test]
fn rand2d_regenerates_from_its_seed() {
    let a = builtins::config("rand2d", None, 3).unwrap().to_json_string();
    let b = builtins::config("rand2d", None, 3).unwrap().to_json_string();
    let c = builtins::config("rand2d", None, 4).unwrap().to_json_string();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn rationals_parse_exactly() {
    let x = Scalar::parse(Mode::Rational, "1/3", "0").unwrap();
    let three = Scalar::ratio(Mode::Rational, 3, 1);
    assert_eq!(x.mul(&three), Scalar::one(Mode::Rational));
}

#[test]
fn non_symmetric_eta_is_rejected() {
    let mut cfg = builtins::config("a2", None, 7).unwrap();
    cfg.eta[0][1] = "2".into();
    assert!(matches!(cfg.build(), Err(ConfigError::Model(ModelError::EtaNotSymmetric))));
}

#[test]
fn unknown_keys_are_rejected_with_a_pointer() {
    let cfg = builtins::config("gravity1d", None, 7).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&cfg.to_json_string()).unwrap();
    v["truncation"]["extra"] = 1.into();
    match ModelConfig::from_json_str(&v.to_string()) {
        Err(ConfigError::Schema { path, msg }) => {
            assert_eq!(path, "/truncation/extra");
            assert!(msg.contains("extra"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn array_positions_appear_in_pointers() {
    let cfg = builtins::config("a2", None, 7).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&cfg.to_json_string()).unwrap();
    v["prepotential"][1]["re"] = 3.into();
    match ModelConfig::from_json_str(&v.to_string()) {
        Err(ConfigError::Schema { path, .. }) => assert_eq!(path, "/prepotential/1/re"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn bad_terms_report_their_location() {
    let cfg = builtins::config("a2", None, 7).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&cfg.to_json_string()).unwrap();
    v["prepotential"][1]["mono"][0][2] = 9.into();
    let err = ModelConfig::from_json_str(&v.to_string()).unwrap().build().unwrap_err();
    match err {
        ConfigError::Schema { path, .. } => assert_eq!(path, "/prepotential/1/mono/0"),
        other => panic!("{other:?}"),
    }
    v["eta"][0][0] = "1/0".into();
    let err = ModelConfig::from_json_str(&v.to_string()).unwrap().build().unwrap_err();
    assert!(matches!(err, ConfigError::Schema { ref path, .. } if path == "/eta/0/0"), "{err}");
}

#[test]
fn truncation_gates() {
    let mut cfg = builtins::config("a2", None, 7).unwrap();
    cfg.truncation.i_max = 0;
    assert!(matches!(cfg.build(), Err(ConfigError::Schema { ref path, .. }) if path == "/truncation/i_max"));
    let mut cfg = builtins::config("a2", None, 7).unwrap();
    cfg.truncation.d_max = 0;
    assert!(cfg.build().is_err());
}

#[test]
fn real_structure_must_be_an_involution() {
    let mut cfg = builtins::config("gravity1d", None, 7).unwrap();
    let rs = cfg.real_structure.as_mut().unwrap();
    rs.k.entries[0][0][0].re = "2".into();
    assert!(matches!(cfg.build(), Err(ConfigError::Model(ModelError::NotInvolution(_)))));
}
