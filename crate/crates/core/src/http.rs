//! Minimal JSON-over-HTTP client shared by the external service adapters.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Endpoint {
    pub url: String,
    pub timeout_secs: f64,
    /// Extra attempts after the first failure.
    pub retries: u32,
    /// Name of an environment variable holding a bearer token.
    pub credential_env: Option<String>,
}

impl Default for Endpoint {
    fn default() -> Self {
        Endpoint { url: String::new(), timeout_secs: 30.0, retries: 2, credential_env: None }
    }
}

impl Endpoint {
    pub fn new(url: impl Into<String>) -> Self {
        Endpoint { url: url.into(), ..Default::default() }
    }

    fn agent(&self) -> ureq::Agent {
        ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(self.timeout_secs.max(0.001))))
            .build()
            .into()
    }

    fn credential(&self) -> Result<Option<String>, String> {
        match &self.credential_env {
            None => Ok(None),
            Some(var) => std::env::var(var).map(Some).map_err(|_| format!("credential variable {var} is not set")),
        }
    }

    /// POSTs `body` and returns the parsed JSON reply, retrying on failure.
    pub fn post_json(&self, body: &Value) -> Result<Value, String> {
        if self.url.is_empty() {
            return Err("no endpoint url configured".into());
        }
        let token = self.credential()?;
        let agent = self.agent();
        let mut last = String::new();
        for attempt in 0..=self.retries {
            let mut req = agent.post(&self.url);
            if let Some(t) = &token {
                req = req.header("Authorization", &format!("Bearer {t}"));
            }
            match req.send_json(body) {
                Ok(mut resp) => match resp.body_mut().read_json::<Value>() {
                    Ok(v) => return Ok(v),
                    Err(e) => last = format!("malformed response: {e}"),
                },
                Err(e) => last = e.to_string(),
            }
            log::debug!("POST {} attempt {} failed: {last}", self.url, attempt + 1);
        }
        Err(last)
    }

    /// POSTs `body` and extracts the string field `text` from the reply.
    pub fn post_for_text(&self, body: &Value) -> Result<String, String> {
        let reply = self.post_json(body)?;
        reply
            .get("text")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| "response has no string field `text`".to_string())
    }
}
