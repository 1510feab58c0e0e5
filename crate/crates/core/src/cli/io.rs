//! Channel and representation files, number formatting and atomic output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::channels::{choi_from_kraus, product_output_reps, BiReps, BidirectionalChannel, ChannelChoi, GroupRep, IsometricExtension};
use crate::qcore::{CMat, C64};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    kind: String,
    dims: BTreeMap<String, usize>,
    data: Value,
}

/// A channel read from disk. Point-to-point channels are kept separately so
/// that their single-channel bound can be reported too.
#[derive(Debug, Clone)]
pub struct LoadedChannel {
    pub bidirectional: BidirectionalChannel,
    pub point: Option<ChannelChoi>,
    /// Kraus operators when given directly (or from an isometry)
    pub kraus: Option<Vec<CMat>>,
}

fn parse_err(path: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{path}: line {}, column {}: {e}", e.line(), e.column()))
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn complex(v: &Value, at: &str) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::from(n.as_f64().unwrap_or(f64::NAN))),
        Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::Parse(format!("{at}: complex entry must be [re, im] numbers"))),
        },
        _ => Err(Error::Parse(format!("{at}: expected [re, im], found {v}"))),
    }
}

/// Row-major nested arrays of [re, im] pairs.
pub fn parse_matrix(v: &Value, at: &str) -> Result<CMat> {
    let rows = v.as_array().ok_or_else(|| Error::Parse(format!("{at}: matrix must be an array of rows")))?;
    if rows.is_empty() {
        return Err(Error::Parse(format!("{at}: empty matrix")));
    }
    let cols = rows[0].as_array().map(|r| r.len()).unwrap_or(0);
    let mut m = CMat::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| Error::Parse(format!("{at}: row {i} is not an array")))?;
        if r.len() != cols {
            return Err(Error::Parse(format!("{at}: row {i} has {} entries, expected {cols}", r.len())));
        }
        for (j, z) in r.iter().enumerate() {
            m[(i, j)] = complex(z, &format!("{at}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

pub fn matrix_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn dim(dims: &BTreeMap<String, usize>, key: &str, path: &str) -> Result<usize> {
    match dims.get(key) {
        Some(&d) if d > 0 => Ok(d),
        Some(_) => Err(Error::Parse(format!("{path}: dims.{key} must be positive"))),
        None => Err(Error::Parse(format!("{path}: dims.{key} is missing"))),
    }
}

fn matrices(v: &Value, path: &str) -> Result<Vec<CMat>> {
    let list = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: data must be a list of matrices")))?;
    list.iter().enumerate().map(|(k, m)| parse_matrix(m, &format!("{path}: data[{k}]"))).collect()
}

pub fn parse_channel(text: &str, path: &str) -> Result<LoadedChannel> {
    let f: ChannelFile = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    let bidirectional = f.dims.contains_key("S_A") || f.dims.contains_key("S_B");
    let (din, dout, input, output) = if bidirectional {
        let (sa, a, b, sb) = (dim(&f.dims, "S_A", path)?, dim(&f.dims, "A", path)?, dim(&f.dims, "B", path)?, dim(&f.dims, "S_B", path)?);
        (sa * sb, a * b, [sa, sb], [a, b])
    } else {
        let (i, o) = (dim(&f.dims, "in", path)?, dim(&f.dims, "out", path)?);
        (i, o, [i, 1], [1, o])
    };
    let (choi, kraus) = match f.kind.as_str() {
        "kraus" => {
            let ks = matrices(&f.data, path)?;
            if ks.iter().any(|k| k.shape() != (dout, din)) {
                return Err(Error::Parse(format!("{path}: Kraus operators must be {dout}×{din}")));
            }
            (choi_from_kraus(&ks)?, Some(ks))
        }
        "choi" => {
            let j = parse_matrix(&f.data, &format!("{path}: data"))?;
            if bidirectional {
                let n = BidirectionalChannel { j, dims: [input[0], output[0], output[1], input[1]] };
                if n.tp_residual() > crate::channels::CPTP_TOL {
                    return Err(Error::invalid(format!("{path}: Choi operator is not trace preserving")));
                }
                let point = n.point();
                ChannelChoi::new(point.j.clone(), din, dout)?;
                return Ok(LoadedChannel { bidirectional: n, point: None, kraus: None });
            }
            (ChannelChoi::new(j, din, dout)?, None)
        }
        "isometry" => {
            let env = dim(&f.dims, "env", path)?;
            let v = parse_matrix(&f.data, &format!("{path}: data"))?;
            let iso = IsometricExtension::new(v, din, dout, env)?;
            let ks = iso.kraus();
            (iso.channel(), Some(ks))
        }
        other => return Err(Error::Parse(format!("{path}: unknown channel kind \"{other}\""))),
    };
    if bidirectional {
        let n = BidirectionalChannel::from_point(&choi, input, output)?;
        Ok(LoadedChannel { bidirectional: n, point: None, kraus })
    } else {
        let n = BidirectionalChannel::one_sided(&choi)?;
        Ok(LoadedChannel { bidirectional: n, point: Some(choi), kraus })
    }
}

pub fn load_channel(path: &str) -> Result<LoadedChannel> {
    parse_channel(&read(path)?, path)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepsFile {
    preset: Option<String>,
    u: Option<Value>,
    v: Option<Value>,
    w: Option<Value>,
    t: Option<Value>,
}

fn group(v: &Value, path: &str, name: &str) -> Result<GroupRep> {
    let els = matrices(v, &format!("{path}: {name}"))?;
    let labels = (0..els.len()).map(|k| format!("{name}{k}")).collect();
    GroupRep::new(els, labels)
}

fn grid(v: &Value, path: &str, name: &str) -> Result<Vec<Vec<CMat>>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: {name} must be indexed [g][h]")))?;
    rows.iter().enumerate().map(|(g, r)| matrices(r, &format!("{path}: {name}[{g}]"))).collect()
}

/// Representations for bicovariance. Without explicit `w`/`t` the channel must
/// be unitary, and the output representations are found by factoring.
pub fn parse_reps(text: &str, path: &str, ch: &LoadedChannel) -> Result<BiReps> {
    let f: RepsFile = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    let [sa, _, _, sb] = ch.bidirectional.dims;
    let (u, v) = match f.preset.as_deref() {
        Some("pauli") | Some("hw") => (GroupRep::heisenberg_weyl(sa), GroupRep::heisenberg_weyl(sb)),
        Some(other) => return Err(Error::Parse(format!("{path}: unknown preset \"{other}\""))),
        None => {
            let u = f.u.as_ref().ok_or_else(|| Error::Parse(format!("{path}: missing \"u\"")))?;
            let v = f.v.as_ref().ok_or_else(|| Error::Parse(format!("{path}: missing \"v\"")))?;
            (group(u, path, "u")?, group(v, path, "v")?)
        }
    };
    match (&f.w, &f.t) {
        (Some(w), Some(t)) => Ok(BiReps { u, v, w: grid(w, path, "w")?, t: grid(t, path, "t")? }),
        (None, None) => {
            let gate = match &ch.kraus {
                Some(ks) if ks.len() == 1 => ks[0].clone(),
                _ => {
                    return Err(Error::invalid(format!(
                        "{path}: output representations \"w\" and \"t\" are required unless the channel is a single unitary"
                    )))
                }
            };
            product_output_reps(&gate, &u, &v)
        }
        _ => Err(Error::Parse(format!("{path}: give both \"w\" and \"t\" or neither"))),
    }
}

pub fn load_reps(path: &str, ch: &LoadedChannel) -> Result<BiReps> {
    parse_reps(&read(path)?, path, ch)
}

/// 12 significant digits, '.' decimal point, no locale.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{:.11e}", x);
        let (mant, e) = s.split_once('e').unwrap();
        return format!("{}e{}", trim(mant), e);
    }
    let decimals = (11 - exp).max(0) as usize;
    trim(&format!("{:.*}", decimals, x)).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Write `content` to `out` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(content.as_bytes())?;
            so.flush()?;
        }
        Some(p) => {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(3.169925001442312), "3.16992500144");
        assert_eq!(fmt_sig(-1.5e-7), "-1.5e-7");
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn malformed_json_reports_position() {
        let e = parse_channel("{\"kind\": \"kraus\",\n \"dims\": }", "x.json").unwrap_err();
        assert!(matches!(e, Error::Parse(ref m) if m.contains("line 2")), "{e}");
    }

    #[test]
    fn cnot_kraus_file_round_trip() {
        let g = crate::qcore::cnot();
        let text = serde_json::json!({
            "kind": "kraus",
            "dims": {"S_A": 2, "A": 2, "B": 2, "S_B": 2},
            "data": [matrix_json(&g)],
        })
        .to_string();
        let ch = parse_channel(&text, "cnot.json").unwrap();
        let expect = BidirectionalChannel::from_unitary(&g, 2, 2).unwrap();
        assert!((&ch.bidirectional.j - &expect.j).iter().all(|z| z.norm() < 1e-15));
        let reps = parse_reps("{\"preset\": \"pauli\"}", "reps.json", &ch).unwrap();
        assert!(crate::channels::verify_bicovariance(&ch.bidirectional, &reps).unwrap().ok);
    }

    #[test]
    fn point_channel_becomes_one_sided() {
        let text = serde_json::json!({
            "kind": "isometry",
            "dims": {"in": 2, "out": 3, "env": 3},
            "data": matrix_json(&crate::channels::erasure_isometry(2, 0.25)),
        })
        .to_string();
        let ch = parse_channel(&text, "erasure.json").unwrap();
        assert_eq!(ch.bidirectional.dims, [2, 1, 3, 1]);
        assert_eq!(ch.point.as_ref().unwrap().d_out, 3);
    }

    #[test]
    fn non_tp_kraus_is_rejected() {
        let text = serde_json::json!({
            "kind": "kraus",
            "dims": {"in": 2, "out": 2},
            "data": [[[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]],
        })
        .to_string();
        assert!(parse_channel(&text, "bad.json").is_err());
    }
}
