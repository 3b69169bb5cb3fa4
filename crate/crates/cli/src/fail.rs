//! Process failure carrying its exit status: 2 when the input was
//! rejected, 3 when the work itself failed.

use std::fmt;

#[derive(Debug)]
pub struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    /// Bad or missing input: flags, config, files, formats. Exit 2.
    pub fn validation(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            code: 2,
        }
    }

    /// Failure while doing the work (training, inference, writing). Exit 3.
    pub fn runtime(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            code: 3,
        }
    }

    pub fn code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CmdResult<T> = Result<T, Failure>;
