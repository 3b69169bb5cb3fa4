//! Text serialization of trained models.
//!
//! Every model file is UTF-8 text: one header line, then one
//! `feature<TAB>weight` line per feature in sorted feature order. Weights
//! are printed with 17 significant digits, which round-trips every finite
//! f64 bit-exactly. Three kinds of file exist:
//!
//! - parser models: header `biparse-model v1 <lang> <templates-tag>`;
//! - path-length classifiers: header `biparse-pathlen v1`, holding all five
//!   length vectors with features prefixed `k<length>|`;
//! - path predictors: header `biparse-pathpred v1 k=<k>`, one file per path
//!   length k in 2..=5.

use crate::error::{Error, Result};
use crate::parser::Weights;
use crate::projection::{PathLengthModel, PathPredictorModel};

/// Feature-template tag this build writes and accepts in parser models.
pub const EDGE_TEMPLATES_TAG: &str = "edge-v1";

fn format_weight(w: f64) -> String {
    format!("{w:.16e}")
}

fn parse_weight(lineno: usize, text: &str) -> Result<f64> {
    let value: f64 = text
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad weight {text:?}")))?;
    if !value.is_finite() {
        return Err(Error::parse(lineno, format!("non-finite weight {text:?}")));
    }
    Ok(value)
}

/// Body lines after the header: `feature<TAB>weight`, duplicates rejected.
fn parse_body(text: &str) -> Result<Vec<(String, f64)>> {
    let mut entries: Vec<(String, f64)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let (feature, weight) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(lineno, "expected feature<TAB>weight"))?;
        if feature.is_empty() {
            return Err(Error::parse(lineno, "empty feature name"));
        }
        if !seen.insert(feature.to_owned()) {
            return Err(Error::parse(lineno, format!("duplicate feature {feature:?}")));
        }
        entries.push((feature.to_owned(), parse_weight(lineno, weight)?));
    }
    Ok(entries)
}

fn header_of(text: &str) -> Result<&str> {
    text.lines()
        .next()
        .ok_or_else(|| Error::Model("empty model file".into()))
}

/// Render a parser model for language `lang`.
pub fn write_parser_model(weights: &Weights, lang: &str) -> String {
    let mut out = format!("biparse-model v1 {lang} {EDGE_TEMPLATES_TAG}\n");
    for (feature, weight) in weights.iter() {
        out.push_str(feature);
        out.push('\t');
        out.push_str(&format_weight(weight));
        out.push('\n');
    }
    out
}

/// Parse a parser model; returns the weights and the language id from the
/// header. A templates tag other than the one this build produces is
/// rejected — features under a different extraction scheme are meaningless.
pub fn read_parser_model(text: &str) -> Result<(Weights, String)> {
    let header = header_of(text)?;
    let fields: Vec<&str> = header.split(' ').collect();
    match fields.as_slice() {
        ["biparse-model", "v1", lang, tag] => {
            if *tag != EDGE_TEMPLATES_TAG {
                return Err(Error::Model(format!(
                    "unsupported feature templates tag {tag:?} (this build reads {EDGE_TEMPLATES_TAG:?})"
                )));
            }
            let weights: Weights = parse_body(text)?.into_iter().collect();
            Ok((weights, (*lang).to_owned()))
        }
        _ => Err(Error::Model(format!("bad parser model header {header:?}"))),
    }
}

/// Render all five length vectors into one file, features prefixed by
/// their length.
pub fn write_path_length_model(model: &PathLengthModel) -> String {
    let mut out = "biparse-pathlen v1\n".to_string();
    for k in 1..=5 {
        for (feature, weight) in model.vector(k).iter() {
            out.push_str(&format!("k{k}|{feature}\t{}\n", format_weight(weight)));
        }
    }
    out
}

pub fn read_path_length_model(text: &str) -> Result<PathLengthModel> {
    let header = header_of(text)?;
    if header != "biparse-pathlen v1" {
        return Err(Error::Model(format!(
            "bad path-length model header {header:?}"
        )));
    }
    let mut model = PathLengthModel::zero();
    for (idx, (feature, weight)) in parse_body(text)?.into_iter().enumerate() {
        let lineno = idx + 2;
        let rest = feature
            .strip_prefix('k')
            .ok_or_else(|| Error::parse(lineno, format!("missing length prefix in {feature:?}")))?;
        let (k, name) = rest
            .split_once('|')
            .ok_or_else(|| Error::parse(lineno, format!("missing length prefix in {feature:?}")))?;
        let k: usize = k
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad length prefix in {feature:?}")))?;
        if !(1..=5).contains(&k) {
            return Err(Error::parse(lineno, format!("length {k} outside 1..=5")));
        }
        if name.is_empty() {
            return Err(Error::parse(lineno, "empty feature name after prefix"));
        }
        model.vector_mut(k).set(name, weight);
    }
    Ok(model)
}

/// Render one path-predictor vector (`k` in 2..=5) as its own file.
pub fn write_path_predictor_vector(model: &PathPredictorModel, k: usize) -> String {
    let mut out = format!("biparse-pathpred v1 k={k}\n");
    for (feature, weight) in model.vector(k).iter() {
        out.push_str(feature);
        out.push('\t');
        out.push_str(&format_weight(weight));
        out.push('\n');
    }
    out
}

/// Parse one path-predictor file; returns which length it holds and the
/// vector.
pub fn read_path_predictor_vector(text: &str) -> Result<(usize, Weights)> {
    let header = header_of(text)?;
    let fields: Vec<&str> = header.split(' ').collect();
    match fields.as_slice() {
        ["biparse-pathpred", "v1", kfield] => {
            let k: usize = kfield
                .strip_prefix("k=")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| {
                    Error::Model(format!("bad path-predictor header {header:?}"))
                })?;
            if !(2..=5).contains(&k) {
                return Err(Error::Model(format!(
                    "path-predictor length {k} outside 2..=5"
                )));
            }
            Ok((k, parse_body(text)?.into_iter().collect()))
        }
        _ => Err(Error::Model(format!(
            "bad path-predictor header {header:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(entries: &[(&str, f64)]) -> Weights {
        entries
            .iter()
            .map(|(f, w)| ((*f).to_owned(), *w))
            .collect()
    }

    #[test]
    fn parser_model_round_trips_bit_exactly() {
        let awkward = [
            ("pp=VBD|IN", 0.1 + 0.2),
            ("dist=+3", -1.0 / 3.0),
            ("root", 1e-300),
            ("hf=washed", f64::MIN_POSITIVE),
            ("btw=DT_NNS", -12345.678901234567),
        ];
        let w = weights(&awkward);
        let text = write_parser_model(&w, "en");
        let (reread, lang) = read_parser_model(&text).unwrap();
        assert_eq!(lang, "en");
        for (feature, value) in &awkward {
            assert_eq!(reread.get(feature).to_bits(), value.to_bits());
        }
        assert_eq!(write_parser_model(&reread, "en"), text);
    }

    #[test]
    fn parser_model_rejects_foreign_templates_tag() {
        let text = "biparse-model v1 en edge-v2\nroot\t1.0\n";
        assert!(matches!(
            read_parser_model(text),
            Err(Error::Model(msg)) if msg.contains("edge-v2")
        ));
    }

    #[test]
    fn parser_model_rejects_malformed_lines() {
        let ok = "biparse-model v1 en edge-v1\n";
        assert!(read_parser_model(&format!("{ok}root 1.0\n")).is_err());
        assert!(read_parser_model(&format!("{ok}root\tx\n")).is_err());
        assert!(read_parser_model(&format!("{ok}root\tNaN\n")).is_err());
        assert!(read_parser_model(&format!("{ok}root\tinf\n")).is_err());
        assert!(read_parser_model(&format!("{ok}root\t1.0\nroot\t2.0\n")).is_err());
        let err = read_parser_model(&format!("{ok}root\t1.0\nbad line\n")).unwrap_err();
        assert!(err.to_string().contains("line 3"), "got: {err}");
    }

    #[test]
    fn path_length_model_multiplexes_five_vectors() {
        let mut model = PathLengthModel::zero();
        model.vector_mut(1).set("spp=A|B", 0.5);
        model.vector_mut(3).set("spp=A|B", -2.25);
        model.vector_mut(5).set("tdist=5+", 1.0 / 7.0);
        let text = write_path_length_model(&model);
        let reread = read_path_length_model(&text).unwrap();
        assert_eq!(reread, model);
        assert_eq!(write_path_length_model(&reread), text);
        assert_eq!(reread.vector(2).len(), 0);
    }

    #[test]
    fn path_length_model_rejects_unprefixed_features() {
        assert!(read_path_length_model("biparse-pathlen v1\nspp=A|B\t1.0\n").is_err());
        assert!(read_path_length_model("biparse-pathlen v1\nk9|x\t1.0\n").is_err());
        assert!(read_path_length_model("biparse-pathlen v1\nk2|\t1.0\n").is_err());
        assert!(read_path_length_model("biparse-model v1 en edge-v1\n").is_err());
    }

    #[test]
    fn path_predictor_vectors_round_trip() {
        let mut model = PathPredictorModel::zero();
        model.vector_mut(2).set("tpp=NNS|JJ", 4.0);
        model.vector_mut(4).set("sf2=with", -0.125);
        for k in 2..=5 {
            let text = write_path_predictor_vector(&model, k);
            let (kk, vector) = read_path_predictor_vector(&text).unwrap();
            assert_eq!(kk, k);
            assert_eq!(&vector, model.vector(k));
        }
    }

    #[test]
    fn path_predictor_rejects_bad_headers() {
        assert!(read_path_predictor_vector("biparse-pathpred v1 k=1\n").is_err());
        assert!(read_path_predictor_vector("biparse-pathpred v1 k=6\n").is_err());
        assert!(read_path_predictor_vector("biparse-pathpred v1\n").is_err());
        assert!(read_path_predictor_vector("").is_err());
    }
}
