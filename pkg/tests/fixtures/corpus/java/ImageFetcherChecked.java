package bench.cases;

import java.io.File;
import java.io.FileInputStream;
import java.io.IOException;
import java.io.InputStream;
import javax.servlet.http.*;

public class ImageFetcherChecked extends HttpServlet {

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws IOException {
        String imageName = request.getParameter("img");
        File base = new File("/srv/images");
        File target = new File(base, imageName);
        if (!target.getCanonicalPath().startsWith(base.getCanonicalPath() + File.separator)) {
            response.sendError(403);
            return;
        }
        InputStream stream = new FileInputStream(target);
        int next = stream.read();
        while (next >= 0) {
            response.getOutputStream().write(next);
            next = stream.read();
        }
        stream.close();
    }
}
