//! JSON output with every number written to 17 significant digits, so
//! records round-trip exactly and diff cleanly between runs.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::value::Approx;

/// A double as a JSON number literal with 17 significant digits; non-finite
/// values become `null`.
pub fn number(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// Ordered name → value map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamEcho(pub Vec<(String, f64)>);

impl ParamEcho {
    pub fn new<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        Self(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.0.push((name.to_string(), value));
        self
    }
}

impl Serialize for ParamEcho {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &number(*v))?;
        }
        map.end()
    }
}

/// `{"value", "err_est", "work", "params"}` for one computed value.
pub struct Record<'a> {
    pub approx: &'a Approx,
    pub params: &'a ParamEcho,
}

impl Serialize for Record<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Record", 4)?;
        st.serialize_field("value", &number(self.approx.value))?;
        st.serialize_field("err_est", &number(self.approx.err_est))?;
        st.serialize_field("work", &self.approx.work)?;
        st.serialize_field("params", self.params)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [
            0.0,
            1.0,
            -2.5e-300,
            std::f64::consts::PI,
            1.0741606892,
            f64::MAX,
        ] {
            let raw = number(v);
            let back: f64 = serde_json::from_str(raw.get()).unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
        assert_eq!(number(f64::NAN).get(), "null");
    }

    #[test]
    fn record_layout() {
        let a = Approx {
            value: 0.5,
            err_est: 1e-12,
            work: 7,
        };
        let p = ParamEcho::new([("z", 0.5)]).with("a", 1.0);
        let s = serde_json::to_string(&Record {
            approx: &a,
            params: &p,
        })
        .unwrap();
        assert_eq!(
            s,
            r#"{"value":5.0000000000000000e-1,"err_est":9.9999999999999998e-13,"work":7,"params":{"z":5.0000000000000000e-1,"a":1.0000000000000000e0}}"#
        );
    }
}
