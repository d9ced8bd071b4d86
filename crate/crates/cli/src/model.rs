//! Model files: JSON documents holding either a raw cubic form, a
//! resolution model `{form, k, a[]}`, or a group-action spec
//! `{zeta, order}`. Files are schema-validated before any computation.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cubiform::quotient::DiagonalAction;
use cubiform::{CubicForm, ResolutionModel};

/// A diagonal cyclic action named by its generator; the order is the
/// generator's multiplicative order and may be stated redundantly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpec {
    pub zeta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

impl ActionSpec {
    pub fn to_action(&self) -> Result<DiagonalAction> {
        let action = DiagonalAction::from_name(&self.zeta)
            .with_context(|| format!("invalid action generator `{}`", self.zeta))?;
        if let Some(order) = self.order {
            if order != action.order() {
                bail!(
                    "declared order {order} does not match the order {} of `{}`",
                    action.order(),
                    self.zeta
                );
            }
        }
        Ok(action)
    }
}

pub enum ModelFile {
    Form(CubicForm),
    Resolution(ResolutionModel),
    Action(ActionSpec),
}

/// Parses a model file, dispatching on its top-level fields.
pub fn parse_model(json: &str) -> Result<ModelFile> {
    let value: serde_json::Value =
        serde_json::from_str(json).context("model file is not valid JSON")?;
    let Some(obj) = value.as_object() else {
        bail!("model file must be a JSON object");
    };
    if obj.contains_key("entries") {
        let form: CubicForm =
            serde_json::from_value(value).context("invalid cubic form")?;
        Ok(ModelFile::Form(form))
    } else if obj.contains_key("form") {
        let model: ResolutionModel =
            serde_json::from_value(value).context("invalid resolution model")?;
        Ok(ModelFile::Resolution(model))
    } else if obj.contains_key("zeta") {
        let spec: ActionSpec =
            serde_json::from_value(value).context("invalid action spec")?;
        spec.to_action()?;
        Ok(ModelFile::Action(spec))
    } else {
        bail!("unrecognized model file: expected a cubic form, resolution model, or action spec");
    }
}

pub fn load_model(path: &std::path::Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_model(&text).with_context(|| format!("in {}", path.display()))
}

pub fn load_form(path: &std::path::Path) -> Result<CubicForm> {
    match load_model(path)? {
        ModelFile::Form(f) => Ok(f),
        _ => bail!("{} does not contain a cubic form", path.display()),
    }
}

pub fn load_resolution(path: &std::path::Path) -> Result<ResolutionModel> {
    match load_model(path)? {
        ModelFile::Resolution(m) => Ok(m),
        _ => bail!("{} does not contain a resolution model", path.display()),
    }
}
