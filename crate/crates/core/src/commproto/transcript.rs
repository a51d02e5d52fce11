use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bits::ceil_log2;
use crate::qcore::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageKind {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// A quantum register; charged by its declared dimension, not its support.
    Quantum {
        state: StateVector,
        declared_dim: usize,
    },
    Classical(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolMessage {
    /// Step of the protocol at which the message is sent.
    pub step: usize,
    pub direction: Direction,
    pub payload: Payload,
    /// Qubits for quantum payloads, bits for classical ones.
    pub charge: usize,
}

impl ProtocolMessage {
    pub fn kind(&self) -> MessageKind {
        match self.payload {
            Payload::Quantum { .. } => MessageKind::Quantum,
            Payload::Classical(_) => MessageKind::Classical,
        }
    }
}

impl Serialize for ProtocolMessage {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ProtocolMessage", 5)?;
        s.serialize_field("step", &self.step)?;
        s.serialize_field("direction", &self.direction)?;
        s.serialize_field("kind", &self.kind())?;
        s.serialize_field("charge", &self.charge)?;
        match &self.payload {
            Payload::Quantum { declared_dim, .. } => {
                s.serialize_field("declared_dim", declared_dim)?
            }
            Payload::Classical(bits) => {
                let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                s.serialize_field("bits", &text)?
            }
        }
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub step: usize,
    pub kind: MessageKind,
    pub amount: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CostLedger {
    pub qubits_total: usize,
    pub bits_total: usize,
    pub per_step: Vec<LedgerEntry>,
}

impl CostLedger {
    pub fn charge(&mut self, step: usize, kind: MessageKind, amount: usize) {
        match kind {
            MessageKind::Quantum => self.qubits_total += amount,
            MessageKind::Classical => self.bits_total += amount,
        }
        self.per_step.push(LedgerEntry { step, kind, amount });
    }
}

/// The only channel between the parties: every message is recorded and charged.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Transcript {
    pub messages: Vec<ProtocolMessage>,
    pub ledger: CostLedger,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sends a quantum register of `declared_dim` basis states, charged
    /// `ceil(log2(declared_dim))` qubits.
    pub fn send_quantum(
        &mut self,
        step: usize,
        direction: Direction,
        state: StateVector,
        declared_dim: usize,
    ) -> &StateVector {
        self.push(
            step,
            direction,
            Payload::Quantum {
                state,
                declared_dim,
            },
            ceil_log2(declared_dim),
        );
        match &self.messages.last().expect("just pushed").payload {
            Payload::Quantum { state, .. } => state,
            Payload::Classical(_) => unreachable!(),
        }
    }

    pub fn send_classical(
        &mut self,
        step: usize,
        direction: Direction,
        bits: Vec<bool>,
    ) -> &[bool] {
        let charge = bits.len();
        self.push(step, direction, Payload::Classical(bits), charge);
        match &self.messages.last().expect("just pushed").payload {
            Payload::Classical(bits) => bits,
            Payload::Quantum { .. } => unreachable!(),
        }
    }

    fn push(&mut self, step: usize, direction: Direction, payload: Payload, charge: usize) {
        let msg = ProtocolMessage {
            step,
            direction,
            payload,
            charge,
        };
        self.ledger.charge(step, msg.kind(), charge);
        self.messages.push(msg);
    }

    /// True iff the ledger totals equal the sum of message charges.
    pub fn is_consistent(&self) -> bool {
        let sum = |k: MessageKind| -> usize {
            self.messages
                .iter()
                .filter(|m| m.kind() == k)
                .map(|m| m.charge)
                .sum()
        };
        sum(MessageKind::Quantum) == self.ledger.qubits_total
            && sum(MessageKind::Classical) == self.ledger.bits_total
    }
}
