use ico_cqed::serial::{from_json, to_json, SerialError};
use ico_cqed_core::{
    AtomFieldKet, AtomLevel, Complex64, Control, Error, FieldKet, FullKet, PureState,
};
use proptest::prelude::*;

#[test]
fn writes_documented_layout() {
    let s = PureState::from_amplitudes([(
        FullKet::new(Control::Zero, AtomFieldKet::excited(1, 0)),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    )])
    .unwrap();
    assert_eq!(
        to_json(&s),
        r#"{"kets":[{"control":0,"atom":"e","n":1,"m":0,"re":7.0710678118654757e-1,"im":0.0000000000000000e0}]}"#
    );
}

#[test]
fn fields_only_kets_use_null_labels() {
    let s = PureState::from_ket(FieldKet::new(2, 3));
    let text = to_json(&s);
    assert!(text.contains(r#""control":null,"atom":null,"n":2,"m":3"#));
    assert_eq!(from_json::<FieldKet>(&text).unwrap(), s);
}

#[test]
fn flavor_mismatch_is_rejected() {
    let full = r#"{"kets":[{"control":1,"atom":"g","n":0,"m":0,"re":1.0,"im":0.0}]}"#;
    let atom = r#"{"kets":[{"control":null,"atom":"g","n":0,"m":0,"re":1.0,"im":0.0}]}"#;
    assert!(matches!(
        from_json::<AtomFieldKet>(full),
        Err(SerialError::Model(Error::FlavorMismatch { .. }))
    ));
    assert!(matches!(
        from_json::<FullKet>(atom),
        Err(SerialError::Model(Error::FlavorMismatch { .. }))
    ));
    assert!(matches!(
        from_json::<FieldKet>(atom),
        Err(SerialError::Model(Error::FlavorMismatch { .. }))
    ));
    assert!(from_json::<AtomFieldKet>(atom).is_ok());
}

#[test]
fn bad_labels_are_rejected() {
    let bad_atom = r#"{"kets":[{"control":null,"atom":"x","n":0,"m":0,"re":1.0,"im":0.0}]}"#;
    let bad_control = r#"{"kets":[{"control":2,"atom":"e","n":0,"m":0,"re":1.0,"im":0.0}]}"#;
    let extra_field =
        r#"{"kets":[{"control":null,"atom":"e","n":0,"m":0,"re":1.0,"im":0.0,"p":1}]}"#;
    assert!(matches!(
        from_json::<AtomFieldKet>(bad_atom),
        Err(SerialError::AtomLevel(_))
    ));
    assert!(matches!(
        from_json::<FullKet>(bad_control),
        Err(SerialError::Control(2))
    ));
    assert!(matches!(
        from_json::<AtomFieldKet>(extra_field),
        Err(SerialError::Json(_))
    ));
}

#[test]
fn repeated_kets_are_summed() {
    let text = r#"{"kets":[{"control":null,"atom":"e","n":0,"m":0,"re":0.25,"im":0.0},{"control":null,"atom":"e","n":0,"m":0,"re":0.5,"im":-1.0}]}"#;
    let s = from_json::<AtomFieldKet>(text).unwrap();
    assert_eq!(
        s.amplitude(&AtomFieldKet::excited(0, 0)),
        Complex64::new(0.75, -1.0)
    );
}

fn full_state() -> impl Strategy<Value = PureState<FullKet>> {
    let ket = (any::<bool>(), any::<bool>(), 0u32..50, 0u32..50).prop_map(|(c, a, n, m)| {
        let control = if c { Control::One } else { Control::Zero };
        let atom = if a {
            AtomLevel::Ground
        } else {
            AtomLevel::Excited
        };
        FullKet::new(control, AtomFieldKet::new(atom, n, m))
    });
    let amp = (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(re, im)| Complex64::new(re, im));
    prop::collection::vec((ket, amp), 0..20).prop_map(|v| PureState::from_amplitudes(v).unwrap())
}

proptest! {
    #[test]
    fn round_trip_is_bit_exact(s in full_state()) {
        let back = from_json::<FullKet>(&to_json(&s)).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for ((k0, a0), (k1, a1)) in s.iter().zip(back.iter()) {
            prop_assert_eq!(k0, k1);
            prop_assert_eq!(a0.re.to_bits(), a1.re.to_bits());
            prop_assert_eq!(a0.im.to_bits(), a1.im.to_bits());
        }
    }
}
