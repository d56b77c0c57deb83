use crate::error::{Error, Result};
use crate::gralg::{parse_presentation, CompiledAlgebra, Metadata, PresentationFile, TransferDecl};
use crate::ops::OperatedAlgebra;
use crate::transfer::{DivisorModel, TableModel, TransferModel};

/// A loaded presentation: the operated algebra, its transfer models and
/// group-level metadata. Stub entries carry metadata and verdicts only.
#[derive(Clone, Debug)]
pub struct Entry {
    pub id: String,
    pub file: PresentationFile,
    ops: Option<OperatedAlgebra>,
    transfers: Vec<TransferModel>,
}

impl Entry {
    pub fn from_text(id: &str, text: &str) -> Result<Self> {
        let file = parse_presentation(text)?;
        if file.stub {
            return Ok(Entry {
                id: id.to_string(),
                file,
                ops: None,
                transfers: Vec::new(),
            });
        }
        let ops = OperatedAlgebra::new(CompiledAlgebra::compile(file.main.clone())?)?;
        let mut transfers = Vec::new();
        for decl in &file.transfers {
            transfers.push(match decl {
                TransferDecl::Divisor(d) => TransferModel::Divisor(DivisorModel::new(&ops, d)?),
                TransferDecl::Table(t) => TransferModel::Table(TableModel::new(&ops, &file, t)?),
            });
        }
        Ok(Entry {
            id: id.to_string(),
            file,
            ops: Some(ops),
            transfers,
        })
    }

    pub fn is_stub(&self) -> bool {
        self.ops.is_none()
    }

    pub fn ops(&self) -> Result<&OperatedAlgebra> {
        self.ops.as_ref().ok_or_else(|| Error::StubEntry(self.id.clone()))
    }

    pub fn algebra(&self) -> Result<&CompiledAlgebra> {
        Ok(self.ops()?.algebra())
    }

    pub fn meta(&self) -> &Metadata {
        &self.file.main.meta
    }

    pub fn group(&self) -> &str {
        if self.meta().group.is_empty() {
            &self.id
        } else {
            &self.meta().group
        }
    }

    pub fn transfers(&self) -> &[TransferModel] {
        &self.transfers
    }

    pub fn transfer(&self, name: &str) -> Result<&TransferModel> {
        self.transfers
            .iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| Error::UnknownModel(name.to_string()))
    }

    pub fn verdicts(&self) -> &[String] {
        &self.file.verdicts
    }
}
