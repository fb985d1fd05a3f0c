//! Scriptable client double: succeeds as an identity round trip, fails in
//! a chosen phase, or corrupts its output. Used to exercise harness
//! failure handling and the call-order contract; also a starting point for
//! adapter authors.

use std::sync::{Arc, Mutex};

use super::{
    ClientCapabilities, ClientError, ClientFactory, FftClient, HostBuffer, Lifecycle, Phase,
};
use crate::harness::BenchmarkCase;

#[derive(Debug, Clone, Default)]
pub struct MockBehavior {
    /// Phase whose call reports a backend failure.
    pub fail_in: Option<Phase>,
    /// Download a visibly wrong buffer so validation fails.
    pub corrupt_roundtrip: bool,
    /// Refuse every case at construction.
    pub unsupported: bool,
    /// Walk the plans-upfront variant of the call order.
    pub plans_upfront: bool,
    /// Pretend to own a backend timer reporting this many milliseconds for
    /// the execute phases.
    pub backend_execute_ms: Option<f64>,
}

/// Identity "transform": upload stashes the buffer, download returns it
/// unchanged. Reports `normalizes_inverse` so the harness compares the
/// echo directly against the input.
pub struct MockClient {
    lifecycle: Lifecycle,
    behavior: MockBehavior,
    stash: Option<HostBuffer>,
    log: Arc<Mutex<Vec<String>>>,
}

impl MockClient {
    fn step(&mut self, phase: Phase) -> Result<(), ClientError> {
        self.lifecycle.advance(phase)?;
        self.log.lock().unwrap().push(phase.name().to_string());
        if self.behavior.fail_in == Some(phase) {
            return Err(ClientError::Backend {
                message: format!("scripted failure in {phase}"),
            });
        }
        Ok(())
    }
}

impl FftClient for MockClient {
    fn capabilities(&self) -> ClientCapabilities {
        ClientCapabilities::new(true, self.behavior.plans_upfront)
    }

    fn allocate(&mut self) -> Result<(), ClientError> {
        self.step(Phase::Allocate)
    }

    fn get_alloc_size(&self) -> Result<u64, ClientError> {
        self.lifecycle.allow_size_query()?;
        Ok(self.stash.as_ref().map_or(0, HostBuffer::byte_len))
    }

    fn get_transfer_size(&self) -> Result<u64, ClientError> {
        self.lifecycle.allow_size_query()?;
        Ok(self.stash.as_ref().map_or(0, HostBuffer::byte_len))
    }

    fn get_plan_size(&self) -> Result<u64, ClientError> {
        self.lifecycle.allow_size_query()?;
        Ok(0)
    }

    fn init_forward(&mut self) -> Result<(), ClientError> {
        self.step(Phase::InitForward)
    }

    fn init_inverse(&mut self) -> Result<(), ClientError> {
        self.step(Phase::InitInverse)
    }

    fn upload(&mut self, input: &HostBuffer) -> Result<(), ClientError> {
        self.step(Phase::Upload)?;
        self.stash = Some(input.clone());
        Ok(())
    }

    fn execute_forward(&mut self) -> Result<(), ClientError> {
        self.step(Phase::ExecuteForward)
    }

    fn execute_inverse(&mut self) -> Result<(), ClientError> {
        self.step(Phase::ExecuteInverse)
    }

    fn download(&mut self, output: &mut HostBuffer) -> Result<(), ClientError> {
        self.step(Phase::Download)?;
        let stash = self.stash.as_ref().ok_or_else(|| ClientError::Backend {
            message: "nothing uploaded".into(),
        })?;
        *output = stash.clone();
        if self.behavior.corrupt_roundtrip {
            output.divide_all(0.5); // doubles every scalar
        }
        Ok(())
    }

    fn destroy(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::Destroy)?;
        self.log.lock().unwrap().push("destroy".to_string());
        self.stash = None;
        Ok(())
    }

    fn backend_phase_ms(&self, phase: Phase) -> Option<f64> {
        match phase {
            Phase::ExecuteForward | Phase::ExecuteInverse => self.behavior.backend_execute_ms,
            _ => None,
        }
    }
}

/// Factory for [`MockClient`]s answering to one client title. The shared
/// call log records every lifecycle call of every constructed client.
pub struct MockFactory {
    pub title: String,
    pub behavior: MockBehavior,
    log: Arc<Mutex<Vec<String>>>,
}

impl MockFactory {
    pub fn new(title: impl Into<String>, behavior: MockBehavior) -> Self {
        Self {
            title: title.into(),
            behavior,
            log: Arc::new(Mutex::new(Vec::new())),
        }
    }

    pub fn call_log(&self) -> Vec<String> {
        self.log.lock().unwrap().clone()
    }

    pub fn clear_log(&self) {
        self.log.lock().unwrap().clear();
    }

    /// A bare client outside any factory, for driving the lifecycle by
    /// hand.
    pub fn client(behavior: MockBehavior) -> MockClient {
        MockClient {
            lifecycle: Lifecycle::new(behavior.plans_upfront),
            behavior,
            stash: None,
            log: Arc::new(Mutex::new(Vec::new())),
        }
    }
}

impl ClientFactory for MockFactory {
    fn construct(&self, case: &BenchmarkCase) -> Result<Box<dyn FftClient>, ClientError> {
        if case.client_title != self.title {
            return Err(ClientError::UnknownClient {
                title: case.client_title.clone(),
            });
        }
        if self.behavior.unsupported {
            return Err(ClientError::Unsupported {
                reason: "scripted unsupported".into(),
            });
        }
        self.log.lock().unwrap().push("construct".to_string());
        Ok(Box::new(MockClient {
            lifecycle: Lifecycle::new(self.behavior.plans_upfront),
            behavior: self.behavior.clone(),
            stash: None,
            log: Arc::clone(&self.log),
        }))
    }
}
