import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Console colour for log output: "auto", "always" or "never".
# NO_COLOR (https://no-color.org) wins over everything else.
TRACECODE_COLOR = os.getenv("TRACECODE_COLOR", "auto").lower()
if os.getenv("NO_COLOR"):
    TRACECODE_COLOR = "never"

# Logging Settings
LOG_LEVEL = "INFO"
LOG_DIR = "logs"

# Runner Settings
DEFAULT_JOBS = 1
DEFAULT_FORMAT = "text"
OUTPUT_FORMATS = ("text", "json", "csv")

# Largest field order the toolkit is exercised on (5^4). Bigger fields work
# but are slow and untested.
MAX_FIELD_ORDER = 625

# Published reference instances (p, e, l)
PUBLISHED_EXAMPLES = {
    "example1": (3, 2, 1),
    "example2": (3, 4, 1),
    "example3": (3, 4, 2),
}
