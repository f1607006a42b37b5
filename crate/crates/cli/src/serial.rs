//! JSON state files.
//!
//! ```json
//! {"kets":[{"control":0,"atom":"e","n":1,"m":0,"re":7.0710678118654757e-1,"im":0.0000000000000000e0}]}
//! ```
//!
//! `control` and `atom` are `null` for flavors that do not carry them. Floats
//! are written with 17 significant digits, so amplitudes survive a round trip
//! bit for bit.

use std::fmt::Write as _;

use ico_cqed_core::{
    AtomFieldKet, AtomLevel, Complex64, Control, FieldKet, FullKet, Ket, PureState,
};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("malformed state file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown atom level `{0}` (expected \"e\" or \"g\")")]
    AtomLevel(String),

    #[error("control must be 0 or 1, got {0}")]
    Control(u8),

    #[error(transparent)]
    Model(#[from] ico_cqed_core::Error),
}

/// One entry of the `kets` array.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetRecord {
    pub control: Option<u8>,
    pub atom: Option<String>,
    pub n: u32,
    pub m: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    kets: Vec<KetRecord>,
}

/// Ket types that have a JSON form.
pub trait JsonKet: Ket {
    const FLAVOR: &'static str;

    fn labels(&self) -> (Option<Control>, Option<AtomLevel>, u32, u32);

    fn from_labels(
        control: Option<Control>,
        atom: Option<AtomLevel>,
        n: u32,
        m: u32,
    ) -> Result<Self, SerialError>;
}

fn mismatch<T>(expected: &'static str) -> Result<T, SerialError> {
    Err(ico_cqed_core::Error::FlavorMismatch { expected }.into())
}

impl JsonKet for FieldKet {
    const FLAVOR: &'static str = "fields only (control and atom null)";

    fn labels(&self) -> (Option<Control>, Option<AtomLevel>, u32, u32) {
        (None, None, self.n, self.m)
    }

    fn from_labels(
        c: Option<Control>,
        a: Option<AtomLevel>,
        n: u32,
        m: u32,
    ) -> Result<Self, SerialError> {
        match (c, a) {
            (None, None) => Ok(FieldKet::new(n, m)),
            _ => mismatch(Self::FLAVOR),
        }
    }
}

impl JsonKet for AtomFieldKet {
    const FLAVOR: &'static str = "atom and fields (control null, atom set)";

    fn labels(&self) -> (Option<Control>, Option<AtomLevel>, u32, u32) {
        (None, Some(self.atom), self.n, self.m)
    }

    fn from_labels(
        c: Option<Control>,
        a: Option<AtomLevel>,
        n: u32,
        m: u32,
    ) -> Result<Self, SerialError> {
        match (c, a) {
            (None, Some(atom)) => Ok(AtomFieldKet::new(atom, n, m)),
            _ => mismatch(Self::FLAVOR),
        }
    }
}

impl JsonKet for FullKet {
    const FLAVOR: &'static str = "control, atom and fields (all set)";

    fn labels(&self) -> (Option<Control>, Option<AtomLevel>, u32, u32) {
        (
            Some(self.control),
            Some(self.rest.atom),
            self.rest.n,
            self.rest.m,
        )
    }

    fn from_labels(
        c: Option<Control>,
        a: Option<AtomLevel>,
        n: u32,
        m: u32,
    ) -> Result<Self, SerialError> {
        match (c, a) {
            (Some(control), Some(atom)) => Ok(FullKet::new(control, AtomFieldKet::new(atom, n, m))),
            _ => mismatch(Self::FLAVOR),
        }
    }
}

pub fn to_json<K: JsonKet>(s: &PureState<K>) -> String {
    let mut out = String::from("{\"kets\":[");
    for (i, (k, a)) in s.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let (control, atom, n, m) = k.labels();
        let control = control.map_or("null".to_string(), |c| c.bit().to_string());
        let atom = atom.map_or("null".to_string(), |l| format!("\"{}\"", l.label()));
        write!(
            out,
            "{{\"control\":{control},\"atom\":{atom},\"n\":{n},\"m\":{m},\"re\":{:.16e},\"im\":{:.16e}}}",
            a.re, a.im
        )
        .expect("writing to a String cannot fail");
    }
    out.push_str("]}");
    out
}

fn parse_level(s: &str) -> Result<AtomLevel, SerialError> {
    match s {
        "e" => Ok(AtomLevel::Excited),
        "g" => Ok(AtomLevel::Ground),
        other => Err(SerialError::AtomLevel(other.to_string())),
    }
}

/// Parses a state of flavor `K`. Records of another flavor are rejected with
/// [`ico_cqed_core::Error::FlavorMismatch`]; repeated kets are summed.
pub fn from_json<K: JsonKet>(text: &str) -> Result<PureState<K>, SerialError> {
    let file: StateFile = serde_json::from_str(text)?;
    let mut pairs = Vec::with_capacity(file.kets.len());
    for r in file.kets {
        let control = r
            .control
            .map(|b| Control::from_bit(b).ok_or(SerialError::Control(b)))
            .transpose()?;
        let atom = r.atom.as_deref().map(parse_level).transpose()?;
        pairs.push((
            K::from_labels(control, atom, r.n, r.m)?,
            Complex64::new(r.re, r.im),
        ));
    }
    Ok(PureState::from_amplitudes(pairs)?)
}
