use super::{Prediction, VictimError, VictimOracle};
use serde::Deserialize;
use std::time::Duration;

/// HTTP client for a remote victim speaking the classify protocol:
/// `POST <endpoint>/classify {"text": str}` returning
/// `{"label": int, "confidence": [float]?}`.
pub struct RemoteVictim {
    url: String,
    timeout: Duration,
    agent: ureq::Agent,
}

/// Bind a remote victim endpoint.
pub fn bind_remote(endpoint: &str, timeout: Duration) -> RemoteVictim {
    let agent = ureq::AgentBuilder::new()
        .timeout_connect(timeout)
        .timeout(timeout)
        .build();
    RemoteVictim {
        url: format!("{}/classify", endpoint.trim_end_matches('/')),
        timeout,
        agent,
    }
}

#[derive(Deserialize)]
struct ClassifyResponse {
    label: i64,
    #[serde(default)]
    confidence: Option<Vec<f64>>,
}

impl VictimOracle for RemoteVictim {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        let response = self
            .agent
            .post(&self.url)
            .send_json(ureq::json!({ "text": text }))
            .map_err(|e| classify_error(e, self.timeout))?;
        let parsed: ClassifyResponse = response
            .into_json()
            .map_err(|e| VictimError::Protocol(e.to_string()))?;
        if parsed.label < 0 {
            return Err(VictimError::Protocol(format!(
                "negative label {}",
                parsed.label
            )));
        }
        let label = parsed.label as usize;
        match parsed.confidence {
            None => Ok(Prediction::label_only(label)),
            Some(confidence) => {
                let prediction = Prediction::from_confidence(confidence)
                    .map_err(|e| VictimError::Protocol(e.to_string()))?;
                if prediction.label != label {
                    return Err(VictimError::Protocol(format!(
                        "label {label} is not the confidence argmax {}",
                        prediction.label
                    )));
                }
                Ok(prediction)
            }
        }
    }
}

pub(crate) fn classify_error(e: ureq::Error, timeout: Duration) -> VictimError {
    match e {
        ureq::Error::Status(code, _) => VictimError::Status(code),
        ureq::Error::Transport(t) => {
            let text = t.to_string();
            if text.contains("timed out") || text.contains("timeout") {
                VictimError::Timeout(timeout)
            } else {
                VictimError::Transport(text)
            }
        }
    }
}
