use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use contlog::interp::Interpretation;
use contlog::kernel::TruthValue;
use contlog::semantics::{Element, GeneralStructure};
use contlog::textio::{self, Diagnostic};
use contlog::{Formula, FormulaSequence, Theory, Vocabulary};
use thiserror::Error;

use crate::Common;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {diag}")]
    Diagnostic { path: String, diag: Diagnostic },
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("missing required flag --{0}")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub type Input<T> = Result<T, InputError>;

fn read(path: &Path) -> Input<String> {
    std::fs::read_to_string(path).map_err(|e| InputError::Io(path.display().to_string(), e))
}

fn diag(path: &str) -> impl FnOnce(Diagnostic) -> InputError + '_ {
    move |d| InputError::Diagnostic {
        path: path.to_string(),
        diag: d,
    }
}

pub fn invalid(e: impl std::fmt::Display) -> InputError {
    InputError::Invalid(e.to_string())
}

pub fn structure_at(path: &PathBuf) -> Input<GeneralStructure> {
    let text = read(path)?;
    textio::parse_structure(&text).map_err(diag(&path.display().to_string()))
}

impl Common {
    pub fn structures(&self) -> Input<Vec<GeneralStructure>> {
        self.structure.iter().map(structure_at).collect()
    }

    pub fn one_structure(&self) -> Input<GeneralStructure> {
        match self.structure.as_slice() {
            [p] => structure_at(p),
            [] => Err(InputError::Missing("structure")),
            _ => Err(invalid("expected exactly one --structure")),
        }
    }

    /// The vocabulary from --vocab, else from the first structure.
    pub fn vocabulary(&self) -> Input<Vocabulary> {
        if let Some(p) = &self.vocab {
            let text = read(p)?;
            return textio::parse_vocabulary(&text).map_err(diag(&p.display().to_string()));
        }
        match self.structure.first() {
            Some(p) => Ok(structure_at(p)?.vocab().clone()),
            None => Err(InputError::Missing("vocab")),
        }
    }

    fn formula_text(arg: &str) -> Input<(String, String)> {
        let p = Path::new(arg);
        if p.extension().is_some_and(|e| e == "cmlf")
            || (p.is_file() && !arg.trim_start().starts_with('('))
        {
            Ok((read(p)?, p.display().to_string()))
        } else {
            Ok((arg.to_string(), "--formula".to_string()))
        }
    }

    pub fn formula(&self, vocab: &Vocabulary) -> Input<Formula> {
        let arg = self
            .formula
            .as_deref()
            .ok_or(InputError::Missing("formula"))?;
        let (text, origin) = Self::formula_text(arg)?;
        textio::parse_formula(&text, vocab).map_err(diag(&origin))
    }

    pub fn distance(&self, vocab: &Vocabulary) -> Input<Option<Formula>> {
        let Some(arg) = self.distance.as_deref() else {
            return Ok(None);
        };
        let (text, origin) = Self::formula_text(arg)?;
        textio::parse_formula(&text, vocab)
            .map(Some)
            .map_err(diag(&origin))
    }

    pub fn theory(&self, vocab: &Vocabulary) -> Input<Theory> {
        let p = self.theory.as_ref().ok_or(InputError::Missing("theory"))?;
        textio::parse_theory(&read(p)?, vocab).map_err(diag(&p.display().to_string()))
    }

    pub fn sequence(&self, vocab: &Vocabulary) -> Input<FormulaSequence> {
        let p = self
            .sequence
            .as_ref()
            .ok_or(InputError::Missing("sequence"))?;
        textio::parse_sequence(&read(p)?, vocab).map_err(diag(&p.display().to_string()))
    }

    pub fn interpretation(&self, vocab: &Vocabulary) -> Input<Interpretation> {
        let p = self.interp.as_ref().ok_or(InputError::Missing("interp"))?;
        textio::parse_interpretation(&read(p)?, vocab).map_err(diag(&p.display().to_string()))
    }

    pub fn tolerance(&self) -> Input<TruthValue> {
        match &self.tolerance {
            None => Ok(TruthValue::zero()),
            Some(t) => {
                let pos = textio::Pos { line: 1, column: 1 };
                textio::parse_value(t, pos).map_err(diag("--tolerance"))
            }
        }
    }

    pub fn grid_exponent(&self) -> Input<u32> {
        Interpretation::exponent_of(self.grid).map_err(invalid)
    }

    pub fn assignment(&self, m: &GeneralStructure) -> Input<BTreeMap<String, Element>> {
        self.assign
            .iter()
            .map(|a| {
                let (var, label) = a
                    .split_once('=')
                    .ok_or_else(|| invalid(format!("--assign expects var=label, got `{a}`")))?;
                let e = m
                    .element(label)
                    .ok_or_else(|| invalid(format!("`{label}` is not in the universe")))?;
                Ok((var.to_string(), e))
            })
            .collect()
    }

    pub fn write_out(&self, text: &str) -> Input<()> {
        if let Some(p) = &self.out {
            std::fs::write(p, format!("{text}\n"))
                .map_err(|e| InputError::Io(p.display().to_string(), e))?;
        }
        Ok(())
    }

    /// The JSON object written by `expand --out`.
    pub fn signature_file(&self) -> Input<Option<serde_json::Value>> {
        let Some(p) = &self.signature else {
            return Ok(None);
        };
        serde_json::from_str(&read(p)?)
            .map(Some)
            .map_err(|e| invalid(format!("{}: {e}", p.display())))
    }
}
