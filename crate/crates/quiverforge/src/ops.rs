//! Operations shared by the CLI and the HTTP service.
//!
//! Every operation takes parsed input and returns a serializable result;
//! [`render`] turns a result into the exact JSON text both front ends emit.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use quiverforge_core::analysis::{analyze, AnalysisReport};
use quiverforge_core::canonical::canonical_form;
use quiverforge_core::membership::{
    bprime_from_banff, derive_certificate, louise_cert_to_banff_cert, lprime_cert_to_bprime_cert, lprime_from_louise,
    pprime_from_bprime, scan_banff_not_louise, verify, Certificate, ClassId, ScanReport, ScanSource,
};
use quiverforge_core::search::{explore_class, ClassExploration, SearchBudget, Verdict};
use quiverforge_core::{Error, MutationSequence, Permutation, Quiver, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OpError {
    /// The input does not have the expected shape.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// The input is well-formed but violates an invariant.
    #[error("{0}")]
    Invalid(String),
}

impl OpError {
    pub fn http_status(&self) -> u16 {
        match self {
            OpError::Malformed(_) => 400,
            OpError::Invalid(_) => 422,
        }
    }
}

impl From<Error> for OpError {
    fn from(e: Error) -> Self {
        OpError::Invalid(e.to_string())
    }
}

pub type OpResult<T> = Result<T, OpError>;

/// Compact JSON for a result.
pub fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("results serialize")
}

/// Read a JSON document of type `T`, separating syntax/shape errors from
/// invariant violations raised while building core values.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> OpResult<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| OpError::Malformed(e.to_string()))?;
    from_value(value)
}

pub fn from_value<T: for<'de> Deserialize<'de>>(value: Value) -> OpResult<T> {
    serde_json::from_value(value).map_err(|e| OpError::Malformed(e.to_string()))
}

/// Quiver JSON as written by users, before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDoc {
    pub n: usize,
    pub arrows: Vec<(u32, u32, i64)>,
}

impl QuiverDoc {
    pub fn build(&self) -> OpResult<Quiver> {
        let arrows = self.arrows.iter().map(|&(s, d, m)| (VertexId::new(s), VertexId::new(d), m));
        Ok(Quiver::from_arrows(self.n, arrows)?)
    }
}

/// Budget JSON; missing fields take the defaults.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetDoc {
    pub max_iso_classes: usize,
    pub max_depth: usize,
    pub max_abs_entry: u64,
    pub max_millis: u64,
}

impl Default for BudgetDoc {
    fn default() -> Self {
        let b = SearchBudget::default();
        BudgetDoc {
            max_iso_classes: b.max_iso_classes,
            max_depth: b.max_depth,
            max_abs_entry: b.max_abs_entry,
            max_millis: b.max_millis,
        }
    }
}

impl BudgetDoc {
    pub fn build(&self) -> OpResult<SearchBudget> {
        let b = SearchBudget {
            max_iso_classes: self.max_iso_classes,
            max_depth: self.max_depth,
            max_abs_entry: self.max_abs_entry,
            max_millis: self.max_millis,
        };
        b.validate()?;
        Ok(b)
    }
}

/// A certificate file: either a bare certificate or the output of `certify`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CertificateDoc {
    Bare(Certificate),
    Certified(CertifyDoc),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CertifyDoc {
    pub class: ClassId,
    #[serde(flatten)]
    pub verdict: Verdict<Certificate>,
}

impl CertificateDoc {
    pub fn into_parts(self) -> OpResult<(Option<ClassId>, Certificate)> {
        match self {
            CertificateDoc::Bare(cert) => Ok((None, cert)),
            CertificateDoc::Certified(CertifyDoc { class, verdict }) => match verdict.into_witness() {
                Some(cert) => Ok((Some(class), cert)),
                None => Err(OpError::Invalid("the certify output holds no certificate".into())),
            },
        }
    }
}

pub fn mutate(q: &Quiver, steps: &MutationSequence) -> OpResult<Quiver> {
    Ok(q.apply_sequence(steps)?)
}

pub fn analyze_quiver(q: &Quiver) -> AnalysisReport {
    analyze(q)
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonResult {
    pub quiver: Quiver,
    /// `relabel[v - 1]` is the canonical label of input vertex `v`.
    pub relabel: Permutation,
}

pub fn canon(q: &Quiver) -> CanonResult {
    let (quiver, relabel) = canonical_form(q);
    CanonResult { quiver, relabel }
}

pub fn search(q: &Quiver, budget: &SearchBudget) -> OpResult<ClassExploration> {
    Ok(explore_class(q, budget)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyResult {
    pub class: ClassId,
    pub budget: SearchBudget,
    #[serde(flatten)]
    pub verdict: Verdict<Certificate>,
}

pub fn certify(q: &Quiver, class: ClassId, budget: &SearchBudget) -> OpResult<CertifyResult> {
    let verdict = derive_certificate(q, class, budget)?;
    Ok(CertifyResult { class, budget: *budget, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub class: ClassId,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub fn checkcert(q: &Quiver, cert: &Certificate, class: ClassId) -> CheckResult {
    match verify(q, cert, class) {
        Ok(()) => CheckResult { class, valid: true, reason: None },
        Err(r) => CheckResult { class, valid: false, reason: Some(r.to_string()) },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformResult {
    pub from: ClassId,
    pub to: ClassId,
    pub certificate: Certificate,
}

/// Convert `cert` into a certificate for `to`, detecting the class it
/// certifies when `from` is not given.
pub fn transform(q: &Quiver, cert: &Certificate, from: Option<ClassId>, to: ClassId) -> OpResult<TransformResult> {
    use ClassId::*;
    let from = match from {
        Some(c) => c,
        None => ClassId::ALL
            .into_iter()
            .find(|&c| verify(q, cert, c).is_ok())
            .ok_or_else(|| OpError::Invalid("certificate is not valid for any class".into()))?,
    };
    let to_bprime = |c: &Certificate| -> OpResult<Certificate> {
        Ok(match from {
            Banff => bprime_from_banff(q, c)?,
            BanffPrime => {
                verify(q, c, BanffPrime).map_err(Error::InvalidInputCertificate)?;
                c.clone()
            }
            Louise => bprime_from_banff(q, &louise_cert_to_banff_cert(q, c)?)?,
            LouisePrime => lprime_cert_to_bprime_cert(q, c)?,
            PPrime => return Err(no_route(from, to)),
        })
    };
    let certificate = match to {
        BanffPrime => to_bprime(cert)?,
        PPrime => pprime_from_bprime(q, &to_bprime(cert)?)?,
        LouisePrime => match from {
            Louise => lprime_from_louise(q, cert)?,
            LouisePrime => {
                verify(q, cert, LouisePrime).map_err(Error::InvalidInputCertificate)?;
                cert.clone()
            }
            _ => return Err(no_route(from, to)),
        },
        Banff => match from {
            Louise => louise_cert_to_banff_cert(q, cert)?,
            _ => return Err(no_route(from, to)),
        },
        Louise => return Err(no_route(from, to)),
    };
    Ok(TransformResult { from, to, certificate })
}

fn no_route(from: ClassId, to: ClassId) -> OpError {
    OpError::Invalid(format!("no transformation from {from} to {to}"))
}

pub fn scan(source: &ScanSource, budget: &SearchBudget) -> OpResult<ScanReport> {
    Ok(scan_banff_not_louise(source, budget)?)
}
