//! Checkpoint files: JSON with shapes and row-major values for every
//! parameter tensor, plus provenance (tool version, config hash, seed).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{Network, NetworkConfig};
use super::tensor::{NnError, Tensor};
use crate::geometry::AnchorConfig;
use crate::Provenance;

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamBlob {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    /// "rpn" or "nrpn".
    pub kind: String,
    /// Table row name of the training ablation ("RPN", "RPN+nRPN", ...).
    pub model: String,
    pub network: NetworkConfig,
    pub anchors: AnchorConfig,
    pub params: Vec<ParamBlob>,
}

impl Checkpoint {
    pub fn from_network(
        net: &Network,
        anchors: &AnchorConfig,
        prov: &Provenance,
        kind: &str,
        model: &str,
    ) -> Self {
        let params = net
            .layers()
            .iter()
            .flat_map(|layer| {
                [
                    ParamBlob {
                        name: format!("{}.weights", layer.name),
                        shape: layer.weights.shape().to_vec(),
                        data: layer.weights.data().to_vec(),
                    },
                    ParamBlob {
                        name: format!("{}.bias", layer.name),
                        shape: layer.bias.shape().to_vec(),
                        data: layer.bias.data().to_vec(),
                    },
                ]
            })
            .collect();
        Self {
            format_version: CHECKPOINT_FORMAT_VERSION,
            tool_version: prov.tool_version.clone(),
            config_hash: prov.config_hash.clone(),
            seed: prov.seed,
            kind: kind.to_string(),
            model: model.to_string(),
            network: net.cfg.clone(),
            anchors: anchors.clone(),
            params,
        }
    }

    /// Rebuilds the network; parameter order and shapes must match.
    pub fn to_network(&self) -> Result<Network, NnError> {
        let mut net = Network::new(self.network.clone(), self.seed)?;
        let mut values = Vec::new();
        let layers = net.layers();
        let mut want_names = Vec::new();
        for layer in &layers {
            want_names.push((format!("{}.weights", layer.name), layer.weights.shape().to_vec()));
            want_names.push((format!("{}.bias", layer.name), layer.bias.shape().to_vec()));
        }
        if want_names.len() != self.params.len() {
            return Err(NnError::Checkpoint(format!(
                "expected {} parameter tensors, found {}",
                want_names.len(),
                self.params.len()
            )));
        }
        for (blob, (name, shape)) in self.params.iter().zip(&want_names) {
            if &blob.name != name || &blob.shape != shape {
                return Err(NnError::Checkpoint(format!(
                    "parameter {} with shape {:?} does not match expected {} {:?}",
                    blob.name, blob.shape, name, shape
                )));
            }
            Tensor::from_vec(&blob.shape, blob.data.clone())
                .map_err(|e| NnError::Checkpoint(e.to_string()))?;
            values.extend_from_slice(&blob.data);
        }
        net.set_param_vec(&values)?;
        Ok(net)
    }
}

pub fn save_checkpoint(
    path: &Path,
    net: &Network,
    anchors: &AnchorConfig,
    prov: &Provenance,
    kind: &str,
    model: &str,
) -> Result<(), NnError> {
    let ckpt = Checkpoint::from_network(net, anchors, prov, kind, model);
    let json = serde_json::to_string(&ckpt).map_err(|e| NnError::Checkpoint(e.to_string()))?;
    fs::write(path, json).map_err(|e| NnError::Checkpoint(format!("{}: {e}", path.display())))
}

pub fn load_checkpoint(path: &Path) -> Result<(Network, Checkpoint), NnError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| NnError::Checkpoint(format!("{}: {e}", path.display())))?;
    let ckpt: Checkpoint =
        serde_json::from_str(&raw).map_err(|e| NnError::Checkpoint(e.to_string()))?;
    if ckpt.format_version != CHECKPOINT_FORMAT_VERSION {
        return Err(NnError::Checkpoint(format!(
            "unsupported checkpoint format version {}",
            ckpt.format_version
        )));
    }
    let net = ckpt.to_network()?;
    Ok((net, ckpt))
}
