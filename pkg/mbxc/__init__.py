"""
mbxc - Verificador de tipos e interpretador para o cálculo de mailboxes

Faz parsing de programas anotados, decide os julgamentos de tipos de
mailbox (inclusão de padrões, subtipagem, resíduos, formas normais,
aciclicidade de grafos de dependência) e executa/explora programas para
verificar conformidade de mailbox, ausência de deadlock e terminação justa.

Exemplo de uso básico:
    from mbxc import check_program, explore, parse

    programa = parse(open("lock.mbx").read())
    relatorio = check_program(programa)
    grafo = explore(programa, max_states=10_000, max_depth=500)
"""

__version__ = "1.0.0"
__author__ = "Devix Tecnologia"
__description__ = "Verificador de tipos e interpretador para o cálculo de mailboxes"

from .checker import check_process, check_program
from .errors import MbxcError, ParseError, UndecidedError
from .runtime import explore, run, step
from .syntax import parse, print_program

__all__ = [
    "parse",
    "print_program",
    "check_program",
    "check_process",
    "explore",
    "run",
    "step",
    "MbxcError",
    "ParseError",
    "UndecidedError",
]
