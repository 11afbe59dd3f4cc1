from algebraic_learning.container import Container
from dotenv import load_dotenv

load_dotenv()

container = Container()

container.init_resources()
