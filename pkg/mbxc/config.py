# Configurações do mbxc

import os
from pathlib import Path

from dotenv import load_dotenv

# Carregar variáveis de ambiente do arquivo .env
load_dotenv()

# Diretórios do projeto
PACKAGE_DIR = Path(__file__).resolve().parent
CORPUS_DIR = PACKAGE_DIR / "corpus"

# Orçamento de trabalho da busca de inclusão (por consulta)
WORK_BUDGET = int(os.getenv("MBXC_WORK_BUDGET", 200_000))

# Limites padrão de exploração e execução
MAX_STATES = int(os.getenv("MBXC_MAX_STATES", 50_000))
MAX_DEPTH = int(os.getenv("MBXC_MAX_DEPTH", 10_000))
MAX_STEPS = int(os.getenv("MBXC_MAX_STEPS", 1_000))

# Logging
LOG_LEVEL = os.getenv("MBXC_LOG_LEVEL", "WARNING").upper()
