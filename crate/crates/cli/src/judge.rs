//! The chat-completion judge client.
//!
//! Speaks the generic JSON wire shape — request `{model, temperature,
//! messages: [{role, content}]}`, reply `choices[0].message.content` — that
//! hosted judge models and local stand-ins share. Requests are retried on
//! transport and HTTP-status errors with a short linear backoff; a reply
//! that is not the expected shape is not retried, because a malformed 200
//! will be malformed again.
//!
//! Credential hygiene: the bearer credential is read from the environment
//! variable named in the endpoint config, held only in memory, and attached
//! only as the `Authorization` header. It is never logged, never serialized,
//! and deliberately kept out of this type's `Debug` output.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;
use ureq::Agent;

use crate::config::EndpointConfig;

/// Delay before retry `k` (1-based) is `k` times this.
const BACKOFF_STEP: Duration = Duration::from_millis(100);

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error("environment variable {0} is not set (judge credential)")]
    MissingCredential(String),
    #[error("request failed after {attempts} attempt(s): {last}")]
    Exhausted { attempts: u32, last: String },
    #[error("malformed judge reply: {0}")]
    Malformed(String),
}

#[derive(Serialize)]
struct Message<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    messages: [Message<'a>; 1],
}

/// A configured connection to one judge endpoint.
pub struct JudgeClient {
    agent: Agent,
    url: String,
    model: String,
    temperature: f64,
    max_retries: u32,
    credential: Option<String>,
}

impl std::fmt::Debug for JudgeClient {
    /// Manual impl so the credential can never leak through `{:?}`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JudgeClient")
            .field("url", &self.url)
            .field("model", &self.model)
            .field("temperature", &self.temperature)
            .field("max_retries", &self.max_retries)
            .field("credential", &self.credential.as_ref().map(|_| "<redacted>"))
            .finish()
    }
}

impl JudgeClient {
    /// Builds a client, resolving the credential from the environment
    /// variable the config names.
    pub fn from_config(config: &EndpointConfig) -> Result<Self, JudgeError> {
        let credential = match &config.credential_env {
            Some(var) => Some(
                std::env::var(var)
                    .map_err(|_| JudgeError::MissingCredential(var.clone()))?,
            ),
            None => None,
        };
        let agent = Agent::new_with_config(
            Agent::config_builder()
                .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
                .build(),
        );
        Ok(Self {
            agent,
            url: config.url.clone(),
            model: config.model.clone(),
            temperature: config.temperature,
            max_retries: config.max_retries,
            credential,
        })
    }

    /// Sends one prompt and returns the judge's reply text, retrying
    /// transport and status failures.
    pub fn complete(&self, prompt: &str) -> Result<String, JudgeError> {
        let body = ChatRequest {
            model: &self.model,
            temperature: self.temperature,
            messages: [Message { role: "user", content: prompt }],
        };

        let attempts = self.max_retries + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                std::thread::sleep(BACKOFF_STEP * attempt);
            }
            let mut request = self.agent.post(&self.url);
            if let Some(credential) = &self.credential {
                request = request.header("authorization", format!("Bearer {credential}"));
            }
            match request.send_json(&body) {
                Ok(mut response) => {
                    match response.body_mut().read_json::<serde_json::Value>() {
                        Ok(reply) => return extract_content(&reply),
                        Err(err) => last = err.to_string(),
                    }
                }
                Err(err) => last = err.to_string(),
            }
        }
        Err(JudgeError::Exhausted { attempts, last })
    }

    /// Sends every prompt with bounded parallelism and returns the results
    /// in prompt order, regardless of completion order.
    pub fn run_all(
        &self,
        prompts: &[String],
        parallelism: usize,
    ) -> Vec<Result<String, JudgeError>> {
        let workers = parallelism.clamp(1, prompts.len().max(1));
        let cursor = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<String, JudgeError>>>> =
            prompts.iter().map(|_| Mutex::new(None)).collect();

        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let index = cursor.fetch_add(1, Ordering::Relaxed);
                    if index >= prompts.len() {
                        break;
                    }
                    let result = self.complete(&prompts[index]);
                    *slots[index].lock().unwrap() = Some(result);
                });
            }
        });

        slots
            .into_iter()
            .map(|slot| {
                slot.into_inner()
                    .unwrap()
                    .expect("every prompt slot is filled before the scope ends")
            })
            .collect()
    }
}

/// Pulls `choices[0].message.content` out of a chat-completion reply.
fn extract_content(reply: &serde_json::Value) -> Result<String, JudgeError> {
    reply["choices"][0]["message"]["content"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| {
            JudgeError::Malformed(
                "reply carries no choices[0].message.content string".to_string(),
            )
        })
}
