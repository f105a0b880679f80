"""
Gestor de base de datos - Archiva ejecuciones y resultados de barridos
"""
import json
from contextlib import contextmanager
from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.engine import make_url
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker, scoped_session

from config.config import config
from database.models import Base, ExperimentRun, ExperimentRecordRow
from utils.logger import logger
from utils.time_utils import get_local_now


class DatabaseManager:
    """Gestor centralizado de base de datos"""

    def __init__(self):
        self.engine = None
        self.session_factory = None
        self._initialized = False

    def initialize(self, url=None):
        """Inicializa la conexión y crea las tablas si no existen"""
        url = url or config.DATABASE_URL
        try:
            parsed = make_url(url)
            if parsed.get_backend_name() == "sqlite" and parsed.database not in (None, "", ":memory:"):
                Path(parsed.database).parent.mkdir(parents=True, exist_ok=True)

            logger.info(f"Conectando a la base de resultados: {parsed.render_as_string(hide_password=True)}")
            self.engine = create_engine(url, pool_pre_ping=True, echo=False)

            Base.metadata.create_all(self.engine)
            logger.success("Tablas de base de datos creadas/verificadas")

            self.session_factory = scoped_session(sessionmaker(bind=self.engine, expire_on_commit=False))
            self._initialized = True
            return True

        except SQLAlchemyError as e:
            logger.error(f"Error al inicializar base de datos: {e}")
            return False

    @property
    def is_initialized(self):
        return self._initialized

    @contextmanager
    def get_session(self):
        """Context manager para obtener una sesión de BD"""
        if not self._initialized:
            raise RuntimeError("DatabaseManager no inicializado")

        session = self.session_factory()
        try:
            yield session
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Error en sesión de BD: {e}")
            raise
        finally:
            session.close()

    # ==================== EJECUCIONES ====================

    def save_run(self, manifest, records=()):
        """
        Guarda una ejecución y sus filas de resultados.

        Args:
            manifest: RunManifest de la ejecución
            records: ExperimentRecord del barrido (opcional)

        Returns:
            int: id de la ejecución o None si falla
        """
        try:
            with self.get_session() as session:
                run = ExperimentRun(
                    command=manifest.command,
                    code_version=manifest.code_version,
                    manifest=json.dumps(manifest.to_dict(), default=str),
                    started_at=get_local_now().replace(tzinfo=None),
                )
                for record in records:
                    row = record.to_dict()
                    row['seed'] = str(row['seed'])
                    run.records.append(ExperimentRecordRow(**row))
                session.add(run)
                session.flush()
                run_id = run.id

            logger.info(f"Ejecución {manifest.command} guardada con id {run_id} ({len(records)} filas)")
            return run_id

        except SQLAlchemyError as e:
            logger.error(f"Error al guardar ejecución: {e}")
            return None

    def get_runs(self, command=None, limit=50):
        """Últimas ejecuciones como diccionarios, opcionalmente filtradas por comando"""
        try:
            with self.get_session() as session:
                query = session.query(ExperimentRun)
                if command is not None:
                    query = query.filter(ExperimentRun.command == command)
                runs = query.order_by(ExperimentRun.id.desc()).limit(limit).all()
                return [run.to_dict() for run in runs]

        except SQLAlchemyError as e:
            logger.error(f"Error al obtener ejecuciones: {e}")
            return []

    def get_records(self, run_id):
        """Filas de resultados de una ejecución, ordenadas por (variante, p)"""
        try:
            with self.get_session() as session:
                rows = session.query(ExperimentRecordRow).filter(
                    ExperimentRecordRow.run_id == run_id
                ).order_by(ExperimentRecordRow.variant, ExperimentRecordRow.p).all()
                return [row.to_dict() for row in rows]

        except SQLAlchemyError as e:
            logger.error(f"Error al obtener resultados: {e}")
            return []

    def close(self):
        """Cierra la conexión"""
        if self.session_factory is not None:
            self.session_factory.remove()
        if self.engine is not None:
            self.engine.dispose()
        self._initialized = False
        logger.info("Conexión a base de datos cerrada")


# Instancia global
db_manager = DatabaseManager()
