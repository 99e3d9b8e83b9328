from dotenv import load_dotenv

load_dotenv()

# Environment overrides must be loaded before PipelineConfig is imported.
from src.orbifold.presentation.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
