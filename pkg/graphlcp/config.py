import logging

from pydantic_settings import BaseSettings, SettingsConfigDict


logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="GRAPHLCP_", extra="ignore")

    app_name: str = "graphlcp"
    debug: bool = False
    log_level: str = "WARNING"

    # Кэш индексов (пусто = отключён), любой URL SQLAlchemy
    index_cache_url: str = ""

    # ms: сколько потоков обрабатывают строки шаблонов
    ms_workers: int = 4

    # Значения по умолчанию для check (флаги CLI важнее)
    check_patterns: int = 50
    check_max_pattern_length: int = 40
    rmq_sample_pairs: int = 1000


settings = Settings()


# Диагностика конфигурации: вызывается из main() после настройки логирования
def log_configuration(current: Settings) -> None:
    logger.debug("📋 Configuration loaded:")
    logger.debug("   app_name: %s", current.app_name)
    logger.debug("   log_level: %s", current.log_level)
    logger.debug("   index_cache_url: %s", current.index_cache_url or "❌ disabled")
    logger.debug("   ms_workers: %s", current.ms_workers)
