"""
Modelos de base de datos usando SQLAlchemy
"""
from sqlalchemy import Column, Integer, String, Float, DateTime, Text, ForeignKey
from sqlalchemy.orm import declarative_base, relationship
from sqlalchemy.sql import func

Base = declarative_base()


class ExperimentRun(Base):
    """
    Una ejecución de la línea de comandos cuyos resultados se archivan.
    """
    __tablename__ = 'experiment_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    command = Column(String(32), nullable=False, index=True)
    code_version = Column(String(16), nullable=False)

    # Manifiesto completo en JSON
    manifest = Column(Text, nullable=False)

    started_at = Column(DateTime, nullable=True)
    created_at = Column(DateTime, server_default=func.now())

    records = relationship("ExperimentRecordRow", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<ExperimentRun(id={self.id}, command='{self.command}', records={len(self.records)})>"

    def to_dict(self):
        return {
            'id': self.id,
            'command': self.command,
            'code_version': self.code_version,
            'started_at': self.started_at.strftime('%Y-%m-%d %H:%M:%S') if self.started_at else None,
            'n_records': len(self.records),
        }


class ExperimentRecordRow(Base):
    """
    Fila de resultados de un barrido (misma forma que el CSV).
    """
    __tablename__ = 'experiment_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('experiment_runs.id'), nullable=False, index=True)

    variant = Column(String(64), nullable=False, index=True)
    L = Column(Integer, nullable=False)
    p = Column(Float, nullable=False)
    n = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False)
    rate = Column(Float, nullable=False)

    # Referencia y cociente (nulos si algún k es 0)
    ref_variant = Column(String(64), nullable=False)
    ref_k = Column(Integer, nullable=False)
    ref_n = Column(Integer, nullable=False)
    ratio = Column(Float, nullable=True)
    ci_lo = Column(Float, nullable=True)
    ci_hi = Column(Float, nullable=True)
    # Semilla de 64 bits sin signo como texto
    seed = Column(String(20), nullable=False)

    run = relationship("ExperimentRun", back_populates="records")

    def __repr__(self):
        return f"<ExperimentRecordRow(variant='{self.variant}', L={self.L}, p={self.p}, k={self.k}/{self.n})>"

    def to_dict(self):
        """Convierte el modelo a diccionario con las columnas del CSV"""
        return {
            'variant': self.variant, 'L': self.L, 'p': self.p, 'n': self.n, 'k': self.k,
            'rate': self.rate, 'ref_variant': self.ref_variant, 'ref_k': self.ref_k,
            'ref_n': self.ref_n, 'ratio': self.ratio, 'ci_lo': self.ci_lo, 'ci_hi': self.ci_hi,
            'seed': int(self.seed),
        }
